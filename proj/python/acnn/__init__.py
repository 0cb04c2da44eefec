"""Convolutional sentence classifier with a per-region attention layer."""

from ._core import Model, evaluate_file, tokenize, train_file

__all__ = ["Model", "evaluate_file", "tokenize", "train_file"]
