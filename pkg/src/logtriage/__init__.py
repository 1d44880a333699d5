"""Failure-class triage for CI test runs from Kubernetes cluster log dumps.

Pipeline: select the informative dump subtrees (ingest), scrub and tokenize
them (preprocess), vectorize with TF-IDF (features), fit any of five
classifiers (classifiers), and compare them under stratified k-fold
cross-validation with Friedman/Nemenyi ranking (evaluation, stats). The
corpus module generates labeled synthetic dumps so everything is testable
without production data.
"""

__version__ = "0.1.0"

from .labels import ALL_CLASSES, FailureClass

__all__ = ["ALL_CLASSES", "FailureClass", "__version__"]
