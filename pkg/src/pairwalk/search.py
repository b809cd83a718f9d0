"""Exhaustive search for perfect s-pair state transfer on one graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph
from .spectra import HamiltonianKind, SpectralDecomposition, decompose_graph
from .states import SPairState
from .tolerances import DEFAULT, Tolerances
from .transfer import PERIODIC, TransferReport, check_pst, is_periodic

DEFAULT_CAP = 64
SOLVED = "solved"


class CapExceeded(ValueError):
    pass


def state_key(p: SPairState, digits: int = 9) -> tuple:
    """Canonical key of the ray spanned by e_a + s e_b."""
    if p.a < p.b:
        return (p.a, p.b, round(p.s, digits))
    return (p.b, p.a, round(1.0 / p.s, digits))


def _same_s(x: float, y: float) -> bool:
    return abs(x - y) <= 1e-9 * max(1.0, abs(x), abs(y))


def _dedupe(values: Iterable[float]) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or not _same_s(v, out[-1]):
            out.append(v)
    return out


def _quadratic_forms(dec: SpectralDecomposition, s: float) -> np.ndarray:
    """F[k, x, y] = || E_k (e_x + s e_y) ||^2 (unnormalised)."""
    E = dec.projectors
    diag = np.einsum("kii->ki", E)
    return diag[:, :, None] + 2 * s * E + s * s * diag[:, None, :]


def _solved_s(dec: SpectralDecomposition, a: int, b: int, tol: Tolerances) -> dict:
    """Candidate s per target (alpha, beta), from equal support weights at every eigenvalue.

    ||E(e_a + s e_b)||^2 = ||E(e_alpha + s e_beta)||^2 is a quadratic in s for
    each eigenvalue; the rank of the coefficient stack decides whether every
    s, finitely many s, or no s survive. Returns {(alpha, beta): 'all' | [s, ...]}.
    """
    E = dec.projectors
    n = dec.n
    diag = np.einsum("kii->ki", E)
    # coefficients of s^2, s and 1, indexed [k, alpha, beta]
    A = np.broadcast_to(diag[:, b][:, None, None] - diag[:, None, :], (len(dec), n, n))
    B = 2 * (E[:, a, b][:, None, None] - E)
    C = np.broadcast_to(diag[:, a][:, None, None] - diag[:, :, None], (len(dec), n, n))
    K = np.stack([A, B, C], axis=-1).transpose(1, 2, 0, 3)  # (n, n, d, 3)
    mask = ~np.eye(n, dtype=bool)
    mask[a, b] = False
    idx = np.argwhere(mask)
    Ks = K[idx[:, 0], idx[:, 1]]
    _, sv, Vt = np.linalg.svd(Ks, full_matrices=True)
    scale = max(1.0, float(np.abs(E).max()))
    thr = 1e3 * tol.sc_tol * scale
    out = {}
    for (al, be), svals, vt, Km in zip(idx, sv, Vt, Ks):
        rank = int(np.sum(svals > thr))
        if rank == 0:
            out[(int(al), int(be))] = "all"
            continue
        if rank >= 3:
            continue
        cands = []
        if rank == 2:
            v = vt[2]
            if abs(v[2]) > 1e-12:
                s = v[1] / v[2]
                if abs(v[0] / v[2] - s * s) <= 1e-6 * max(1.0, s * s):
                    cands.append(float(s))
        else:
            row = vt[0]
            qa, qb, qc = row
            if abs(qa) > 1e-12:
                disc = qb * qb - 4 * qa * qc
                if disc >= -1e-12:
                    r = math.sqrt(max(disc, 0.0))
                    cands += [(-qb + r) / (2 * qa), (-qb - r) / (2 * qa)]
            elif abs(qb) > 1e-12:
                cands.append(-qc / qb)
        cands = [s for s in cands if s != 0 and math.isfinite(s) and 1e-9 < abs(s) < 1e9]
        if cands:
            out[(int(al), int(be))] = _dedupe(cands)
    return out


@dataclass(frozen=True)
class SearchHit:
    source: SPairState
    target: SPairState
    report: TransferReport

    @property
    def time(self) -> float:
        return self.report.time


def _source_periodic(dec, p: SPairState, tol, cache: dict) -> bool:
    key = state_key(p)
    if key not in cache:
        rep = is_periodic(dec, p.state(dec.n), tol)
        cache[key] = rep.verdict == PERIODIC
    return cache[key]


def pst_search(X: Graph | SpectralDecomposition, kind: HamiltonianKind | str = HamiltonianKind.A,
               s_policy: Sequence = (1.0, -1.0), tol: Tolerances | None = None,
               cap: int = DEFAULT_CAP) -> list[SearchHit]:
    """All perfect s-pair transfers e_a + s e_b -> e_alpha + s e_beta with the same s.

    ``s_policy`` holds explicit s values and/or the string ``"solved"``, which
    adds every s for which some target has equal support weights. Sources
    that are not periodic are skipped, targets must match the source's
    support weights at every eigenvalue, and each transfer is reported once
    (the reverse transfer at the same time is implied).
    """
    tol = tol or DEFAULT
    dec = X if isinstance(X, SpectralDecomposition) else decompose_graph(X, kind, tol)
    n = dec.n
    if n > cap:
        raise CapExceeded(f"graph has {n} vertices, search cap is {cap}")
    explicit = _dedupe(float(s) for s in s_policy if not isinstance(s, str))
    if any(s == 0 for s in explicit):
        raise ValueError("s = 0 is not an s-pair state")
    solved = any(isinstance(s, str) and s.lower() == SOLVED for s in s_policy)

    jobs: dict = {}  # (a, b) -> {s: candidate targets or None}

    def add(a, b, s, targets=None):
        slot = jobs.setdefault((a, b), {})
        for key in slot:
            if _same_s(key, s):
                if targets is None or slot[key] is None:
                    slot[key] = None
                else:
                    slot[key] |= set(targets)
                return
        slot[s] = None if targets is None else set(targets)

    for s in explicit:
        sym = _same_s(abs(s), 1.0)
        for a in range(n):
            for b in range(n):
                if a != b and (not sym or a < b):
                    add(a, b, s)
    if solved:
        for a in range(n):
            for b in range(a + 1, n):
                for tgt, ss in _solved_s(dec, a, b, tol).items():
                    if ss == "all":
                        continue
                    for s in ss:
                        add(a, b, s, [tgt])

    periodic_cache: dict = {}
    forms_cache: dict = {}
    hits: dict = {}
    for (a, b) in sorted(jobs):
        for s, targets in sorted(jobs[(a, b)].items()):
            src = SPairState(a, b, s)
            if not _source_periodic(dec, src, tol, periodic_cache):
                continue
            fkey = round(s, 12)
            if fkey not in forms_cache:
                forms_cache[fkey] = _quadratic_forms(dec, s)
            F = forms_cache[fkey]
            ref = F[:, a, b][:, None, None]
            match = np.all(np.abs(F - ref) <= 1e3 * tol.sc_tol * (1 + s * s), axis=0)
            np.fill_diagonal(match, False)
            cand = np.argwhere(match)
            if targets is not None:
                cand = [c for c in cand if (int(c[0]), int(c[1])) in targets]
            u = src.state(n)
            for al, be in cand:
                tgt = SPairState(int(al), int(be), s)
                if state_key(tgt) == state_key(src):
                    continue
                hkey = frozenset((state_key(src), state_key(tgt)))
                if hkey in hits:
                    continue
                mu = tgt.state(n)
                if u.same_ray(mu):
                    continue
                rep = check_pst(dec, u, mu, tol)
                if rep.is_pst:
                    hits[hkey] = SearchHit(src, tgt, rep)
    return sorted(hits.values(), key=lambda h: (state_key(h.source), state_key(h.target)))
