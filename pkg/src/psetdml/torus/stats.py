"""Summary numbers for an instance (used by the CLI and the dimension guard)."""

from __future__ import annotations

from .model import DMLInstance


def _depth(node) -> int:
    if not isinstance(node, dict):
        return 0
    if "root" in node:
        node = node["root"]
    return 1 + max((_depth(c) for c in node.get("children", ())), default=0)


def instance_stats(I: DMLInstance) -> dict:
    V = I.variety
    return {
        "dim": I.dim,
        "atoms": len(V.atoms),
        "equations": sum(len(a) for a in V.atoms),
        "forms": len(V.forms),
        "max_equation_degree": max((eq.degree() for a in V.atoms for eq in a), default=0),
        "scalar_degree_sum": sum(s.degree() for s in I.endo.scalars),
        "trace_depth": _depth(I.trace),
    }
