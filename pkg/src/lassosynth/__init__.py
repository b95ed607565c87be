"""Template-based invariant generation and synthesis for polynomial lasso programs."""
