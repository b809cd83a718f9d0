"""Distance-regular graphs, antipodal class-2 structure and s-pair transfer on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DistanceStructure, Graph, GraphError, distance_structure
from .spectra import HamiltonianKind, SpectralDecomposition, decompose_graph
from .states import RealState, SPairState
from .tolerances import DEFAULT, Tolerances
from .transfer import (
    PERIODIC,
    TransferError,
    TransferReport,
    check_pst,
    evolve,
    fidelity,
    is_periodic,
)

IDENTITY_ATOL = 1e-7


@dataclass(frozen=True, eq=False)
class DRGData:
    distance: DistanceStructure
    intersection_numbers: np.ndarray | None  # p[i, j] = (A A_j)[x, y] for dist(x, y) = i
    is_drg: bool
    is_antipodal_class2: bool
    antipodal_map: tuple | None

    @property
    def diameter(self) -> int:
        return self.distance.diameter

    @property
    def intersection_array(self) -> tuple | None:
        """({b_0, ..., b_{d-1}}, {c_1, ..., c_d})."""
        p = self.intersection_numbers
        if p is None:
            return None
        d = self.diameter
        b = tuple(int(p[j, j + 1]) for j in range(d))
        c = tuple(int(p[j, j - 1]) for j in range(1, d + 1))
        return b, c

    def antipode(self, v: int) -> int:
        if self.antipodal_map is None:
            raise GraphError("graph is not antipodal of class size two")
        return self.antipodal_map[v]


def drg_detect(X: Graph) -> DRGData:
    """Decide distance-regularity exactly from the distance matrices."""
    X.require_connected("drg_detect")
    X.require_unweighted("drg_detect")
    deg = X.valencies()
    if np.any(deg != deg[0]):
        raise GraphError("drg_detect needs a regular graph")
    ds = distance_structure(X)
    d = ds.diameter
    A = ds[1] if d >= 1 else np.zeros((X.n, X.n), dtype=np.int64)
    D = sum(j * ds[j] for j in range(d + 1))
    p = np.zeros((d + 1, d + 1), dtype=np.int64)
    regular_algebra = True
    for j in range(d + 1):
        AAj = A @ ds[j]
        for i in range(d + 1):
            vals = np.unique(AAj[D == i])
            if len(vals) != 1 or (abs(i - j) > 1 and vals[0] != 0):
                regular_algebra = False
                break
            p[i, j] = vals[0]
        if not regular_algebra:
            break
    amap = None
    if regular_algebra and ds.antipodal_class2:
        amap = tuple(int(np.argmax(ds[d][v])) for v in range(X.n))
        if any(amap[amap[v]] != v or amap[v] == v for v in range(X.n)):
            raise GraphError("antipodal map is not a fixed-point-free involution")
    return DRGData(ds, p if regular_algebra else None, regular_algebra,
                   regular_algebra and ds.antipodal_class2, amap)


@dataclass(frozen=True)
class VertexTransfer:
    time: float
    phase: complex
    report: TransferReport
    residual: float  # ||U(tau) - eta A_d||


def drg_vertex_pst(X: Graph, data: DRGData | None = None, tol: Tolerances | None = None,
                   dec: SpectralDecomposition | None = None) -> VertexTransfer | None:
    """Vertex transfer between antipodes, confirmed through U(tau) = eta A_d."""
    tol = tol or DEFAULT
    data = data or drg_detect(X)
    if not data.is_antipodal_class2:
        raise GraphError("drg_vertex_pst needs an antipodal distance-regular graph of class size two")
    dec = dec or decompose_graph(X, HamiltonianKind.A, tol)
    rep = check_pst(dec, RealState.vertex(X.n, 0), RealState.vertex(X.n, data.antipode(0)), tol)
    if not rep.is_pst:
        return None
    Ad = data.distance[data.diameter].astype(float)
    residual = float(np.abs(dec.evolution(rep.time) - rep.phase * Ad).max())
    if residual >= IDENTITY_ATOL:
        raise TransferError(f"vertex transfer found but ||U(tau) - eta A_d|| = {residual:.3e}")
    return VertexTransfer(rep.time, rep.phase, rep, residual)


def _is_cycle(X: Graph) -> bool:
    return X.m == X.n and bool(np.all(X.valencies() == 2))


def _is_spair_image(w: np.ndarray, s: float, tol: float) -> SPairState | None:
    """The s-pair state that the (complex) vector w is a multiple of, if any."""
    nz = np.flatnonzero(np.abs(w) > tol)
    if len(nz) != 2:
        return None
    x, y = int(nz[0]), int(nz[1])
    for a, b in ((x, y), (y, x)):
        if abs(w[b] - s * w[a]) <= tol * (1 + abs(s)):
            return SPairState(a, b, s)
    return None


def drg_spair_pst(X: Graph, a: int, b: int, s: float, data: DRGData | None = None,
                  tol: Tolerances | None = None, dec: SpectralDecomposition | None = None,
                  vertex: VertexTransfer | None = None) -> TransferReport:
    """Transfer of e_a + s e_b on an antipodal DRG with vertex transfer at tau.

    Non-antipodal pairs go to their antipodal images for every s. An
    antipodal pair swaps (e_b + s e_a) when s is not -1, 0 or 1; for s = +-1
    the state is periodic and never reaches another s-pair state.
    """
    tol = tol or DEFAULT
    if _is_cycle(X):
        raise GraphError("cycles are handled by the cycle classification, not drg_spair_pst")
    data = data or drg_detect(X)
    dec = dec or decompose_graph(X, HamiltonianKind.A, tol)
    vertex = vertex or drg_vertex_pst(X, data, tol, dec)
    if vertex is None:
        raise GraphError("graph has no vertex perfect state transfer")
    src = SPairState(a, b, s)
    u = src.state(X.n)
    tau = vertex.time
    if data.antipode(a) != b:
        tgt = SPairState(data.antipode(a), data.antipode(b), s)
    elif not math.isclose(abs(s), 1.0, rel_tol=0, abs_tol=1e-12):
        tgt = SPairState(b, a, s)
    else:
        return _no_transfer(dec, u, s, tol)
    mu = tgt.state(X.n)
    fid = fidelity(dec, tau, u, mu)
    if fid < 1 - tol.fid_tol:
        raise TransferError(f"predicted transfer {src} -> {tgt} at {tau} has fidelity {fid}")
    rep = check_pst(dec, u, mu, tol)
    if not rep.is_pst or abs(rep.time - tau) > 1e-9 * max(1.0, tau):
        raise TransferError(f"direct decision for {src} -> {tgt} disagrees: {rep.verdict} at {rep.time}")
    return rep


def _no_transfer(dec: SpectralDecomposition, u: RealState, s: float, tol: Tolerances) -> TransferReport:
    """For e_a +- e_b on an antipodal pair: periodic, and U(period/2) u is no s-pair state."""
    per = is_periodic(dec, u, tol)
    if per.verdict != PERIODIC:
        raise TransferError(f"expected a periodic state, got {per.verdict}")
    half = per.time / 2
    w = evolve(dec, half, u)
    image = _is_spair_image(w, s, 1e-9)
    if image is not None and not image.state(dec.n).same_ray(u):
        raise TransferError(f"state reaches {image} at half its minimum period")
    return TransferReport(PERIODIC, u, u, per.time, per.phase, per.certification, per.classification,
                          time_fraction=per.time_fraction, oracle_fidelity=per.oracle_fidelity,
                          notes=("no perfect state transfer: U(period/2) u is not an s-pair state",))


def k_unimodal(data: DRGData) -> bool:
    """k_0 <= ... <= k_{ceil(d/2)} >= ... >= k_d."""
    k = data.distance.k
    mid = math.ceil(data.diameter / 2)
    return all(k[i] <= k[i + 1] for i in range(mid)) and all(k[i] >= k[i + 1] for i in range(mid, len(k) - 1))
