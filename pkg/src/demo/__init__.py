"""End-to-end demo on the published example hypotheses."""
