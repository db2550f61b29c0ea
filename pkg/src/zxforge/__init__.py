"""ZX-calculus rewriting, circuit simulation, Hopf-algebra checks and information geometry."""

__version__ = "0.1.0"
