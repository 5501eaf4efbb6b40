from .citations import CITATIONS, Citation, row
from .classify import ClassificationReport, Coherent, Inconclusive, NotCoherent, classify_curve, invariant_table
from .emit import SCHEMA, render, to_json, to_markdown, with_schema
