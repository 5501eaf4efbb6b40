"""One-dimensional F-coherence classifier and invariant tables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..errors import PresentationError
from ..groebner.ideals import IdealHandle, LevelRing, RingPresentation, krull_dimension, subalgebra_membership
from ..perfect_poly import PerfPoly, frobenius
from .citations import row

COMPLETENESS_NOTE = (
    "the cited dimension statements assume a complete local domain; "
    "they are applied to the affine presentation as given"
)


@dataclass(frozen=True)
class Coherent:
    n: int


@dataclass(frozen=True)
class NotCoherent:
    witness: str
    reason: str


@dataclass(frozen=True)
class Inconclusive:
    max_level: int


def load_embedding(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PresentationError(f"cannot read embedding file {path}: {exc}") from None
    if "images" not in data or not isinstance(data["images"], dict):
        raise PresentationError("embedding file needs an 'images' object")
    return dict(data["images"])


def _images(R: RingPresentation, normal: RingPresentation, embedding: dict) -> list:
    if isinstance(embedding.get("images"), dict):
        embedding = embedding["images"]
    if all(v in embedding for v in R.vars):
        raw = [embedding[v] for v in R.vars]
    elif len(embedding) == len(R.vars):
        # keys are labels only; images follow the order of R's variables
        raw = list(embedding.values())
    else:
        missing = [v for v in R.vars if v not in embedding]
        raise PresentationError(f"embedding has no image for {', '.join(missing)}")
    imgs = [normal.poly(e) if isinstance(e, str) else e for e in raw]
    # the images must satisfy R's relations
    from ..perfect_poly import evaluate

    ambient = LevelRing(normal, 0)
    for rel in R.relations:
        if not ambient.is_zero(evaluate(rel, dict(zip(R.vars, imgs)))):
            raise PresentationError(f"embedding does not respect relation {rel}")
    return imgs


def _registered_family(normal: RingPresentation, images: list):
    """Return (t, s) when normal is F_p[t,s]/(s^2 - t - 1) and images are {t, t s}, else None."""
    if len(normal.vars) != 2 or len(normal.relations) != 1:
        return None
    for tn, sn in (normal.vars, tuple(reversed(normal.vars))):
        t = PerfPoly.var(tn, normal.char, normal.vars)
        s = PerfPoly.var(sn, normal.char, normal.vars)
        rel = normal.relations[0]
        if rel not in (s * s - t - 1, t + 1 - s * s):
            continue
        if sorted(map(str, images)) == sorted(map(str, (t, t * s))):
            return t, s
    return None


def _family_witness(t: PerfPoly, s: PerfPoly, p: int, max_level: int):
    """For odd p: s^(p^n) = c_n(t) s with c_n(0) = 1, so it is never in F_p[t] + t s F_p[t].

    Returns the levels checked, or None if the normal forms do not have that shape.
    """
    if p == 2:
        return None
    ring = LevelRing(RingPresentation(t.char, t.variables, (s * s - t - 1,)), 0)
    si = [i for i, e in enumerate(next(iter(s.as_dict()))) if e][0]
    bare_s = tuple(Fraction(1) if i == si else Fraction(0) for i in range(len(t.variables)))
    checked = []
    for n in range(max_level + 1):
        power = ring.normal_form(frobenius(s, n))
        if any(mono[si] != 1 for mono, _ in power.terms):
            return None
        if not power.as_dict().get(bare_s, 0):
            return None
        checked.append(n)
    return checked


@dataclass(frozen=True)
class ClassificationReport:
    ring: dict
    dimension: int
    verdict: object
    rows: tuple
    classification: str | None
    tried: dict

    @property
    def coherent(self):
        if isinstance(self.verdict, Coherent):
            return True
        if isinstance(self.verdict, NotCoherent):
            return False
        return None

    def to_dict(self) -> dict:
        v = self.verdict
        if isinstance(v, Coherent):
            verdict = {"kind": "Coherent", "n": v.n}
        elif isinstance(v, NotCoherent):
            verdict = {"kind": "NotCoherent", "witness": v.witness, "reason": v.reason}
        else:
            verdict = {"kind": "Inconclusive", "max_level": v.max_level}
        return {
            "ring": self.ring,
            "dimension": self.dimension,
            "coherent": self.coherent,
            "verdict": verdict,
            "classification": self.classification,
            "rows": list(self.rows),
            "levels_tried": self.tried,
            "footnote": COMPLETENESS_NOTE,
        }


def classify_curve(R: RingPresentation, normalization: RingPresentation, embedding: dict,
                   max_level: int = 3) -> ClassificationReport:
    """Purely-inseparable test of normalization over R, with cited dimension rows."""
    images = _images(R, normalization, embedding)
    ambient = LevelRing(normalization, 0)
    d = krull_dimension(IdealHandle(LevelRing(R, 0), []))
    p = R.p
    levels = {}
    tried = {}
    failing = None
    for sn in normalization.vars:
        s = PerfPoly.var(sn, normalization.char, normalization.vars)
        found = None
        power = s
        for n in range(max_level + 1):
            if n:
                # reduce between Frobenius steps so the powers stay small
                power = ambient.normal_form(power ** p)
            if subalgebra_membership(power, images, ambient):
                found = n
                break
        tried[sn] = list(range((found if found is not None else max_level) + 1))
        if found is None:
            failing = s
            break
        levels[sn] = found
    rows = [row("krull_dimension", d, "krull-dimension-of-initial-ideal"),
            row("gl_dim_upper_bound", 2 * d + 1, "perfection-gldim-upper-bound")]
    classification = None
    if failing is None:
        verdict = Coherent(max(levels.values(), default=0))
        rows.append(row("purely_inseparable_level", verdict.n, "subalgebra-membership-search"))
        if d == 0:
            rows += [row("gl_dim", 0, "zero-dimensional-perfection-is-field"),
                     row("w_dim", 0, "zero-dimensional-perfection-is-field")]
            classification = "field"
        else:
            tag = "one-dimensional-coherence-dichotomy" if d == 1 else "coherent-perfection-dimensions"
            rows += [row("gl_dim", d + 1, tag), row("w_dim", d, tag)]
            if d == 1:
                classification = "valuation ring (stably coherent)"
    else:
        fam = _registered_family(normalization, images)
        checked = _family_witness(*fam, p, max_level) if fam is not None else None
        if checked is not None and d == 1:
            verdict = NotCoherent(
                str(failing),
                "s^(p^n) = c(t) s with c(0) = 1 for every n, and R = F_p[t] + t s F_p[t]",
            )
            rows += [row("gl_dim", 3, "one-dimensional-coherence-dichotomy"),
                     row("w_dim", 2, "cusp-family-characteristic-split")]
            classification = "not F-coherent"
        else:
            verdict = Inconclusive(max_level)
    return ClassificationReport(R.to_dict(), d, verdict, tuple(rows), classification, tried)


def _is_node(R: RingPresentation) -> bool:
    if len(R.vars) != 2 or len(R.relations) != 1:
        return False
    x = PerfPoly.var(R.vars[0], R.char, R.vars)
    y = PerfPoly.var(R.vars[1], R.char, R.vars)
    rel = R.relations[0]
    return any(rel == (x * y).scale(c) for c in range(1, R.p))


def invariant_table(R: RingPresentation) -> dict:
    """Krull dimension, the universal bound, and any registered exact values."""
    d = krull_dimension(IdealHandle(LevelRing(R, 0), []))
    rows = [row("krull_dimension", d, "krull-dimension-of-initial-ideal"),
            row("gl_dim_upper_bound", 2 * d + 1, "perfection-gldim-upper-bound")]
    coherent = None
    pattern = None
    if d == 0:
        coherent = True
        pattern = "zero-dimensional"
        rows += [row("gl_dim", 0, "zero-dimensional-perfection-is-field"),
                 row("w_dim", 0, "zero-dimensional-perfection-is-field")]
    elif _is_node(R):
        coherent = False
        pattern = "node XY"
        rows += [row("gl_dim", 3, "node-perfection-dimensions"),
                 row("w_dim", 2, "node-perfection-dimensions"),
                 row("dim_perfection", 1, "node-perfection-dimensions")]
    elif not R.relations:
        coherent = True
        pattern = "polynomial ring"
        rows += [row("gl_dim", d + 1, "coherent-perfection-dimensions"),
                 row("w_dim", d, "coherent-perfection-dimensions")]
    return {
        "ring": R.to_dict(),
        "dimension": d,
        "coherent": coherent,
        "pattern": pattern,
        "rows": rows,
        "footnote": COMPLETENESS_NOTE,
    }
