"""Hybrid multisource feature fusion for document clustering.

Three feature sources (TF-IDF, LDA topics, word/document embeddings) are each
turned into a document similarity matrix, reduced to their top eigenpairs and
concatenated into one feature matrix for k-means.
"""
__version__ = "0.1.0"
