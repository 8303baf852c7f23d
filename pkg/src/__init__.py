# Hypothesis Reader - Main Package
"""
Hypothesis Reader: finds hypothesis statements in research papers and
deconstructs each one into its cause, its outcome and the kind of link
between them.

This package contains document ingestion, the sentence-level hypothesis
detector and its explainer, the node tagger, the link classifier, the
evaluation harness and the command line pipeline.
"""

__version__ = "1.0.0"
__author__ = "Hypothesis Reader Team"
