"""Toolkit for training and evaluating security-bug-report classifiers.

The package is organized as a small pipeline:

* :mod:`sbrkit.corpus` - bug-report data model, JSON-lines ingestion,
  curation, commit-message bug-id extraction, time-to-fix delay statistics
  and stratified fold assignment.
* :mod:`sbrkit.textprep` - content selection, tokenization, stop-word
  removal and Porter stemming.
* :mod:`sbrkit.features` - vocabulary construction, BF/TF/TF-IDF feature
  vectors, 7x7 TF-IDF heatmap encoding and PGM rendering.
* :mod:`sbrkit.learners` - from-scratch supervised learners behind a
  single train/predict interface.
* :mod:`sbrkit.evaluation` - metrics, cross-validated experiment runs,
  grid sweeps and CSV/markdown report emission.
* :mod:`sbrkit.cli` - the ``sbrkit`` command-line front end.
"""

__version__ = "0.1.0"
