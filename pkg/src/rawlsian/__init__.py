"""Fair random assignment rules with exact rational diagnostics."""
