"""Higher globular modal Kleene algebras, their relation and polygraph models,
and coherent confluence for abstract and string rewriting systems."""

__version__ = "0.1.0"
