"""Pseudo-relevance-feedback query expansion over partitioned feedback documents.

The package takes a TREC-format collection from raw text to a comparative
retrieval report: it indexes the corpus, runs a first retrieval pass per
topic, mines the top-ranked documents for expansion terms by equi-frequency
partitioning and partition-level tf-idf, re-retrieves with three different
group-selection methods, and evaluates every run against the qrels.
"""

__version__ = "0.1.0"
