"""Certification of endomorphism algebras of superelliptic jacobians J^(f,q)."""

from __future__ import annotations

__version__ = "0.1.0"
