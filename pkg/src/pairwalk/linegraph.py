"""Line graphs, the signless Laplacian correspondence, and Cartesian products.

For an unweighted graph with 0/1 incidence matrix R, Q = R R^T and the line
graph has adjacency A_L = R^T R - 2I, so the two walks intertwine:
R U_{A_L}(t) = exp(2it) U_Q(t) R. Positive Q-eigenvalues lambda become line
graph eigenvalues lambda - 2 and the extra eigenvalue -2 lives on the kernel
of R. Structural decisions built on these facts are always cross-checked
against a direct spectral computation on A_L, which is authoritative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy
from scipy.linalg import null_space

from .graph import (
    Graph,
    GraphError,
    cartesian_product,
    cut_edges,
    incidence_matrix,
    is_bipartite,
    is_edge_cut,
    line_graph,
    removal_leaves_bipartite_or_disconnected,
    unicyclic_parity,
)
from .spectra import HamiltonianKind, SpectralDecomposition, classify, decompose_graph, ratio_condition
from .states import RealState, support
from .tolerances import DEFAULT, Tolerances
from .transfer import (
    EXACT,
    NONE,
    NUMERIC,
    PST,
    SC_ONLY,
    SignPartition,
    TransferError,
    TransferReport,
    check_pst,
    fidelity,
    parity_test,
    strongly_cospectral,
)

INTERTWINING_ATOL = 1e-9


class LineGraphError(ArithmeticError):
    """An identity that must hold exactly (or to 1e-9) failed."""


def _edge_id(X: Graph, e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= int(e) < X.m:
            raise GraphError(f"edge id {e} out of range for a graph with {X.m} edges")
        return int(e)
    u, v = e
    return X.edge_id(int(u), int(v))


# --- the correspondence -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LineCorrespondence:
    host: Graph
    line: Graph
    R: np.ndarray
    edge_map: dict  # host edge id -> line graph vertex
    intertwining_residual: float
    tol: Tolerances = DEFAULT

    @cached_property
    def q_dec(self) -> SpectralDecomposition:
        return decompose_graph(self.host, HamiltonianKind.Q, self.tol)

    @cached_property
    def line_dec(self) -> SpectralDecomposition:
        return decompose_graph(self.line, HamiltonianKind.A, self.tol)

    def edge(self, e) -> int:
        return _edge_id(self.host, e)

    def f(self, e) -> RealState:
        """Vertex state of the line graph for host edge ``e``."""
        return RealState.vertex(self.line.n, self.edge_map[self.edge(e)])

    def plus(self, e) -> RealState:
        a, b = self.host.endpoints(self.edge(e))
        return RealState.spair(self.host.n, a, b, 1.0)

    def edge_of_vertex_state(self, u: RealState) -> int:
        nz = np.flatnonzero(np.abs(u.vector) > 1e-12)
        if len(nz) != 1 or u.n != self.line.n:
            raise GraphError("state is not a vertex state of the line graph")
        inverse = {v: k for k, v in self.edge_map.items()}
        return inverse[int(nz[0])]


def _intertwining_residual(R, dq: SpectralDecomposition, dl: SpectralDecomposition, times) -> float:
    Rf = R.astype(float)
    return max(float(np.abs(Rf @ dl.evolution(t) - np.exp(2j * t) * dq.evolution(t) @ Rf).max())
               for t in times)


def line_correspondence(X: Graph, tol: Tolerances | None = None, seed: int = 0,
                        n_times: int = 5) -> LineCorrespondence:
    """Build L(X) with its incidence data and verify Q = R R^T, A_L = R^T R - 2I and the intertwining."""
    tol = tol or DEFAULT
    X.require_unweighted("line_correspondence")
    X.require_connected("line_correspondence")
    R = incidence_matrix(X)
    L, emap = line_graph(X)
    A = X.adjacency().astype(np.int64)
    Q = np.diag(A.sum(axis=1)) + A
    if not np.array_equal(Q, R @ R.T):
        raise LineGraphError("Q != R R^T")
    AL = L.adjacency().astype(np.int64)
    if not np.array_equal(AL, R.T @ R - 2 * np.eye(X.m, dtype=np.int64)):
        raise LineGraphError("A(L(X)) != R^T R - 2I")
    corr = LineCorrespondence(X, L, R, emap, math.nan, tol)
    times = np.random.default_rng(seed).uniform(0.0, 2 * math.pi, n_times)
    res = _intertwining_residual(R, corr.q_dec, corr.line_dec, times)
    if res >= INTERTWINING_ATOL:
        raise LineGraphError(f"intertwining residual {res:.3e} at times {times}")
    object.__setattr__(corr, "intertwining_residual", res)
    return corr


def intertwining_residual(corr: LineCorrespondence, times) -> float:
    return _intertwining_residual(corr.R, corr.q_dec, corr.line_dec, times)


# --- projectors -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MinusTwoProjector:
    F: np.ndarray  # projector onto ker R, the -2 eigenspace of A_L
    basis: np.ndarray  # orthonormal columns
    rank: int


def expected_nullity(X: Graph) -> int:
    return X.m - X.n + (1 if is_bipartite(X) else 0)


def minus_two_projector(corr: LineCorrespondence) -> MinusTwoProjector | None:
    """Projector onto ker R, or None when R has full column rank (trees, odd unicyclic hosts)."""
    R = corr.R.astype(float)
    rcond = 1e-10
    K = null_space(R, rcond=rcond)
    rank = K.shape[1]
    if rank != expected_nullity(corr.host):
        raise LineGraphError(f"nullity of R is {rank}, expected {expected_nullity(corr.host)}")
    if rank == 0:
        return None
    F = K @ K.T
    if np.abs(R @ F).max() >= 1e-9:
        raise LineGraphError("R F_{-2} != 0")
    try:
        direct = corr.line_dec.projector(-2.0)
    except KeyError:
        raise LineGraphError("kernel of R is nontrivial but -2 is not an eigenvalue of A_L") from None
    if np.abs(direct - F).max() >= 1e-8:
        raise LineGraphError("kernel projector disagrees with the -2 eigenprojector")
    F.flags.writeable = False
    return MinusTwoProjector(F, K, rank)


def F_theta(corr: LineCorrespondence, lam: float) -> np.ndarray:
    """lambda^{-1} R^T E_lambda R: the line graph projector for eigenvalue lambda - 2."""
    if lam <= 0:
        raise ValueError("F_theta needs a positive Q-eigenvalue")
    R = corr.R.astype(float)
    return R.T @ corr.q_dec.projector(lam) @ R / lam


# --- pulling transfers between the two walks ----------------------------------

def plus_state_pull(corr: LineCorrespondence, report: TransferReport,
                    tol: Tolerances | None = None) -> TransferReport:
    """Turn vertex transfer f_ab -> f_alpha_beta on L(X) into plus-state transfer under Q on X.

    The phase becomes eta * exp(-2i tau) and the result is confirmed on the Q walk.
    """
    tol = tol or corr.tol
    if not report.is_pst:
        raise ValueError("plus_state_pull needs a transfer report")
    e1 = corr.edge_of_vertex_state(report.source)
    e2 = corr.edge_of_vertex_state(report.target)
    tau = report.time
    if fidelity(corr.line_dec, tau, report.source, report.target) < 1 - tol.fid_tol:
        raise TransferError("line-graph transfer does not hold at the reported time")
    u, mu = corr.plus(e1), corr.plus(e2)
    out = corr.q_dec.evolution(tau) @ u.vector
    phase = complex(np.vdot(mu.vector, out))
    predicted = report.phase * np.exp(-2j * tau) if report.phase is not None else phase
    fid = abs(phase)
    if fid < 1 - tol.fid_tol or abs(phase - predicted) > 1e-7:
        raise TransferError(f"pulled plus-state transfer fails: fidelity {fid}, phase {phase} vs {predicted}")
    return TransferReport(PST, u, mu, tau, complex(predicted), report.certification, report.classification,
                          None, report.time_fraction, fid, notes=("from line-graph vertex transfer",))


def plus_state_push(corr: LineCorrespondence, report: TransferReport,
                    tol: Tolerances | None = None) -> TransferReport:
    """Converse of the pull, valid when R has full column rank."""
    tol = tol or corr.tol
    if expected_nullity(corr.host) != 0:
        raise GraphError("pushing plus-state transfer to the line graph needs R of full column rank")
    if not report.is_pst:
        raise ValueError("plus_state_push needs a transfer report")

    def edge_of(state):
        nz = tuple(int(k) for k in np.flatnonzero(np.abs(state.vector) > 1e-12))
        if len(nz) != 2 or abs(state.vector[nz[0]] - state.vector[nz[1]]) > 1e-12 or not corr.host.has_edge(*nz):
            raise GraphError("state is not a plus state on an edge")
        return corr.host.edge_id(*nz)

    e1, e2 = edge_of(report.source), edge_of(report.target)
    tau = report.time
    f1, f2 = corr.f(e1), corr.f(e2)
    out = corr.line_dec.evolution(tau) @ f1.vector
    phase = complex(np.vdot(f2.vector, out))
    fid = abs(phase)
    if fid < 1 - tol.fid_tol:
        raise TransferError(f"pushed vertex transfer fails with fidelity {fid}")
    return TransferReport(PST, f1, f2, tau, phase, report.certification, report.classification,
                          None, report.time_fraction, fid, notes=("from Q plus-state transfer",))


# --- screening and decisions ----------------------------------------------------

def edge_cut_filters(corr: LineCorrespondence, e1, e2) -> bool:
    """Necessary condition for strong cospectrality of f_e1 and f_e2 in L(X).

    Bipartite hosts (m >= n): the two edges must form an edge cut.
    Non-bipartite hosts (m > n): deleting them must disconnect or bipartize X.
    """
    X = corr.host
    k1, k2 = corr.edge(e1), corr.edge(e2)
    if is_bipartite(X):
        if X.m < X.n:
            raise GraphError("edge-cut screen needs a bipartite host with m >= n")
        return is_edge_cut(X, k1, k2)
    if X.m <= X.n:
        raise GraphError("edge-cut screen needs a non-bipartite host with m > n")
    return removal_leaves_bipartite_or_disconnected(X, k1, k2)


def _same_partition(p: SignPartition, q: SignPartition, tol: float = 1e-7) -> bool:
    def same(xs, ys):
        return len(xs) == len(ys) and all(any(abs(x - y) <= tol for y in ys) for x in xs)
    return same(p.plus, q.plus) and same(p.minus, q.minus)


def _pst_time_differs(a: TransferReport, b: TransferReport) -> bool:
    return a.is_pst and b.is_pst and abs(a.time - b.time) > 1e-9 * max(1.0, a.time)


@dataclass(frozen=True)
class LineDecision:
    edges: tuple
    report: TransferReport  # direct decision on A(L(X)); authoritative
    structural: TransferReport
    q_report: TransferReport  # plus-state decision under Q on the host
    minus_two: str  # "absent", "+", "-" or "mismatch"
    discrepancies: tuple = field(default=())

    @property
    def is_pst(self) -> bool:
        return self.report.is_pst


def _structural_line_report(corr: LineCorrespondence, k1: int, k2: int, q_rep: TransferReport,
                            tol: Tolerances) -> tuple[TransferReport, str]:
    f1, f2 = corr.f(k1), corr.f(k2)
    q_sp = q_rep.sign_partition or strongly_cospectral(corr.q_dec, corr.plus(k1), corr.plus(k2), tol)
    mt = minus_two_projector(corr)
    if mt is None:
        rel = "absent"
    else:
        x1, x2 = mt.F @ f1.vector, mt.F @ f2.vector
        if max(np.linalg.norm(x1), np.linalg.norm(x2)) <= tol.support_tol:
            rel = "absent"
        elif np.linalg.norm(x1 - x2) < tol.sc_tol:
            rel = "+"
        elif np.linalg.norm(x1 + x2) < tol.sc_tol:
            rel = "-"
        else:
            rel = "mismatch"
    if q_sp is None:
        return TransferReport(NONE, f1, f2, notes=("plus states not strongly cospectral under Q",)), rel
    if rel == "mismatch":
        return TransferReport(NONE, f1, f2, notes=("F_-2 f_ab != +-F_-2 f_alpha_beta",)), rel
    plus = [lam - 2 for lam in q_sp.plus]
    minus = [lam - 2 for lam in q_sp.minus]
    if rel == "+":
        plus.append(-2.0)
    elif rel == "-":
        minus.append(-2.0)
    sp = SignPartition(tuple(sorted(plus)), tuple(sorted(minus)))
    cls = classify(sp.support, tol)
    if not cls.exact:
        note = "support fails the ratio condition" if not ratio_condition(sp.support, tol) else \
            "support not integer or quadratic; structural route inconclusive"
        return TransferReport(SC_ONLY, f1, f2, certification=NUMERIC, classification=cls, sign_partition=sp,
                              notes=(note,)), rel
    outcome = parity_test(sp, cls)
    if not outcome:
        return TransferReport(SC_ONLY, f1, f2, certification=EXACT, classification=cls, sign_partition=sp,
                              notes=("parity condition fails",)), rel
    frac = 1 / cls.g
    tau = math.pi * float(frac) / cls.sqrt_delta
    phase = complex(np.exp(-1j * tau * min(sp.plus)))
    fid = fidelity(corr.line_dec, tau, f1, f2)
    return TransferReport(PST, f1, f2, tau, phase, EXACT, cls, sp, frac, fid, notes=("structural prediction",)), rel


def line_pst_decision(corr: LineCorrespondence, e1, e2, tol: Tolerances | None = None) -> LineDecision:
    """Decide vertex transfer f_e1 -> f_e2 in L(X) through Q on X, and directly on A(L(X))."""
    tol = tol or corr.tol
    k1, k2 = corr.edge(e1), corr.edge(e2)
    if k1 == k2:
        raise GraphError("line_pst_decision needs two distinct edges")
    q_rep = check_pst(corr.q_dec, corr.plus(k1), corr.plus(k2), tol)
    structural, rel = _structural_line_report(corr, k1, k2, q_rep, tol)
    direct = check_pst(corr.line_dec, corr.f(k1), corr.f(k2), tol)

    notes = []
    if structural.is_pst != direct.is_pst:
        notes.append(f"structural verdict {structural.verdict} but direct verdict {direct.verdict}")
    elif _pst_time_differs(structural, direct):
        notes.append(f"structural time {structural.time} but direct time {direct.time}")
    if (structural.verdict == NONE) != (direct.verdict == NONE):
        notes.append("strong cospectrality differs between structural and direct routes")
    if structural.sign_partition is not None and direct.sign_partition is not None \
            and not _same_partition(structural.sign_partition, direct.sign_partition):
        notes.append("sign partitions differ between structural and direct routes")
    if rel == "absent" and q_rep.is_pst != direct.is_pst:
        notes.append("-2 is outside the support but Q plus-state and line-graph verdicts differ")
    return LineDecision((k1, k2), direct, structural, q_rep, rel, tuple(notes))


def line_pst_scan(corr: LineCorrespondence, tol: Tolerances | None = None,
                  screen: bool = True) -> list[LineDecision]:
    """Decisions for every edge pair, in edge-id order.

    With ``screen`` the edge-cut filter discards pairs first when it applies;
    screened-out pairs are not strongly cospectral and are omitted.
    """
    X = corr.host
    applies = screen and ((is_bipartite(X) and X.m >= X.n) or (not is_bipartite(X) and X.m > X.n))
    out = []
    for k1 in range(X.m):
        for k2 in range(k1 + 1, X.m):
            if applies and not edge_cut_filters(corr, k1, k2):
                continue
            out.append(line_pst_decision(corr, k1, k2, tol))
    return out


# --- Cartesian products ----------------------------------------------------------

def _integer_nullspace(R: np.ndarray) -> np.ndarray:
    vecs = sympy.Matrix(R.tolist()).nullspace()
    cols = []
    for v in vecs:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v]) if len(v) else 1
        w = [int(x * den) for x in v]
        g = math.gcd(*w) or 1
        cols.append([x // g for x in w])
    if not cols:
        return np.zeros((R.shape[1], 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def _greedy_independent_columns(R: np.ndarray) -> list[int]:
    chosen: list[int] = []
    rank = 0
    for j in range(R.shape[1]):
        trial = sympy.Matrix(R[:, chosen + [j]].tolist())
        r = trial.rank()
        if r > rank:
            chosen.append(j)
            rank = r
    return chosen


@dataclass(frozen=True, eq=False)
class CartesianNullBasis:
    X1: Graph
    X2: Graph
    product: Graph
    R: np.ndarray  # incidence of the product, columns in block order [I(x)R2 | R1(x)I]
    N: np.ndarray  # integer null basis of R, rows in block order
    perm: np.ndarray  # block column k is canonical product edge perm[k]
    ranks: tuple  # (r1, r2)
    tilde: tuple  # chosen independent column ids of R1 and R2

    @property
    def columns(self) -> int:
        return self.N.shape[1]

    @cached_property
    def N_canonical(self) -> np.ndarray:
        out = np.zeros_like(self.N)
        out[self.perm] = self.N
        return out

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the column space of N, in canonical edge order."""
        if self.columns == 0:
            return np.zeros((self.product.m, self.product.m))
        Qm, _ = np.linalg.qr(self.N_canonical.astype(float))
        return Qm @ Qm.T


def expected_columns(n1: int, m1: int, r1: int, n2: int, m2: int, r2: int) -> int:
    return n1 * (m2 - r2) + n2 * (m1 - r1) + r1 * r2


def cartesian_null_basis(X1: Graph, X2: Graph) -> CartesianNullBasis:
    for X in (X1, X2):
        X.require_connected("cartesian_null_basis")
        X.require_unweighted("cartesian_null_basis")
        if X.n < 2:
            raise GraphError("Cartesian factors need at least two vertices")
    P = cartesian_product(X1, X2)
    n1, n2, m1, m2 = X1.n, X2.n, X1.m, X2.m
    R1, R2 = incidence_matrix(X1), incidence_matrix(X2)
    I1, I2 = np.eye(n1, dtype=np.int64), np.eye(n2, dtype=np.int64)
    R = np.hstack([np.kron(I1, R2), np.kron(R1, I2)])

    perm = np.empty(n1 * m2 + m1 * n2, dtype=np.int64)
    for i in range(n1):
        for k, (a, b, _) in enumerate(X2.edges):
            perm[i * m2 + k] = P.edge_id(i * n2 + a, i * n2 + b)
    for k, (a, b, _) in enumerate(X1.edges):
        for g in range(n2):
            perm[n1 * m2 + k * n2 + g] = P.edge_id(a * n2 + g, b * n2 + g)
    Rc = incidence_matrix(P)
    if not np.array_equal(Rc[:, perm], R):
        raise LineGraphError("block incidence matrix does not match the product's edge ids")

    N1, N2 = _integer_nullspace(R1), _integer_nullspace(R2)
    t1, t2 = _greedy_independent_columns(R1), _greedy_independent_columns(R2)
    r1, r2 = len(t1), len(t2)
    if m1 - N1.shape[1] != r1 or m2 - N2.shape[1] != r2:
        raise LineGraphError("rank and nullity of a factor incidence matrix disagree")
    Rt1, Rt2 = R1[:, t1], R2[:, t2]
    It1 = np.zeros((m1, r1), dtype=np.int64)
    It1[t1, range(r1)] = 1
    It2 = np.zeros((m2, r2), dtype=np.int64)
    It2[t2, range(r2)] = 1

    top = np.hstack([np.kron(I1, N2), np.zeros((n1 * m2, N1.shape[1] * n2), dtype=np.int64),
                     -np.kron(Rt1, It2)])
    bottom = np.hstack([np.zeros((m1 * n2, n1 * N2.shape[1]), dtype=np.int64), np.kron(N1, I2),
                        np.kron(It1, Rt2)])
    N = np.vstack([top, bottom])
    if np.any(R @ N != 0):
        raise LineGraphError("R N != 0")
    cols = expected_columns(n1, m1, r1, n2, m2, r2)
    if N.shape[1] != cols:
        raise LineGraphError(f"N has {N.shape[1]} columns, rank formula gives {cols}")
    if cols and np.linalg.matrix_rank(N.astype(float)) != cols:
        raise LineGraphError("columns of N are dependent")
    if cols != expected_nullity(P):
        raise LineGraphError(f"N has {cols} columns but R has nullity {expected_nullity(P)}")
    return CartesianNullBasis(X1, X2, P, R, N, perm, (r1, r2), (tuple(t1), tuple(t2)))


@dataclass(frozen=True)
class ProductEdge:
    """An edge of X1 x X2: either an X2-edge inside the layer of X1-vertex ``vertex``
    (``factor`` 2), or an X1-edge inside the layer of X2-vertex ``vertex`` (``factor`` 1)."""

    factor: int
    edge: int  # edge id in the factor the edge comes from
    vertex: int  # vertex of the other factor


def product_edge(X1: Graph, X2: Graph, P: Graph, eid: int) -> ProductEdge:
    u, v = P.endpoints(eid)
    (i1, j1), (i2, j2) = divmod(u, X2.n), divmod(v, X2.n)
    if i1 == i2:
        return ProductEdge(2, X2.edge_id(j1, j2), i1)
    return ProductEdge(1, X1.edge_id(i1, i2), j1)


def minus_two_relation(nb: CartesianNullBasis, e1: int, e2: int) -> str | None:
    """'+' or '-' when F_-2 h_e1 = +-F_-2 h_e2 (decided exactly through N), else None."""
    N = nb.N_canonical
    r1, r2 = N[e1], N[e2]
    if not np.any(r1) and not np.any(r2):
        return "0"
    if np.array_equal(r1, r2):
        return "+"
    if np.array_equal(r1, -r2):
        return "-"
    return None


def _factor_support(X: Graph, eid: int, tol: Tolerances) -> tuple:
    L, emap = line_graph(X)
    dec = decompose_graph(L, HamiltonianKind.A, tol)
    return support(RealState.vertex(L.n, emap[eid]), dec, tol).values


def _contains(values, x: float, tol: float = 1e-7) -> bool:
    return any(abs(v - x) <= tol for v in values)


def _is_pendant(X: Graph, v: int) -> bool:
    return len(X.neighbors(v)) == 1


def _in_4z(values, tol: float) -> bool:
    return all(abs(v / 4 - round(v / 4)) * 4 <= tol for v in values)


def _is_integral(values, tol: float) -> bool:
    return all(abs(v - round(v)) <= tol for v in values)


@dataclass(frozen=True)
class VPSTDecision:
    edges: tuple
    case: str | None  # "i", "ii" or None
    lam: tuple  # support of f_ab in the relevant factor line graph (case i), else ()
    gap_ok: bool | None
    predicted_sc: bool
    predicted_partition: SignPartition | None
    condition_i: bool
    printed_iii: bool
    alternative_iii: bool
    structural_pst: bool  # integrality condition read as printed
    alternative_pst: bool  # with the sign-class reading of the integrality condition
    minus_two: str | None  # exact F_-2 relation from N
    report: TransferReport  # direct decision on A(L(X1 x X2)); authoritative
    discrepancies: tuple = ()

    @property
    def direct_pst(self) -> bool:
        return self.report.is_pst

    @property
    def direct_sc(self) -> bool:
        return self.report.verdict != NONE


def _condition_i(X1: Graph, X2: Graph, swap: bool) -> bool:
    host, other = (X2, X1) if swap else (X1, X2)
    return other.n == 2 and other.m == 1 and (bool(cut_edges(host)) or unicyclic_parity(host) == "odd")


def vpst_decision(X1: Graph, X2: Graph, e1, e2, tol: Tolerances | None = None,
                  nb: CartesianNullBasis | None = None,
                  corr: LineCorrespondence | None = None) -> VPSTDecision:
    """Structural and direct decisions for vertex transfer between edges of X1 x X2 in its line graph."""
    tol = tol or DEFAULT
    nb = nb or cartesian_null_basis(X1, X2)
    P = nb.product
    corr = corr or line_correspondence(P, tol)
    k1, k2 = _edge_id(P, e1), _edge_id(P, e2)
    if k1 == k2:
        raise GraphError("vpst_decision needs two distinct edges")
    p1, p2 = product_edge(X1, X2, P, k1), product_edge(X1, X2, P, k2)

    case = None
    lam: tuple = ()
    swap = False
    if p1.factor == p2.factor and p1.edge == p2.edge and p1.vertex != p2.vertex:
        swap = p1.factor == 2
        host, other = (X2, X1) if swap else (X1, X2)
        if other.n == 2:
            lam = _factor_support(host, p1.edge, tol)
            if not _contains(lam, -2.0):
                case = "i"
    elif p1.factor != p2.factor:
        q2, q1 = (p1, p2) if p1.factor == 2 else (p2, p1)  # q2: X2-edge at X1-vertex, q1: X1-edge at X2-vertex
        a = q2.vertex
        alpha = q1.vertex
        if a in X1.endpoints(q1.edge) and alpha in X2.endpoints(q2.edge) \
                and _is_pendant(X1, a) and _is_pendant(X2, alpha) \
                and not _contains(_factor_support(X1, q1.edge, tol), -2.0) \
                and not _contains(_factor_support(X2, q2.edge, tol), -2.0):
            case = "ii"

    gap_ok = None
    predicted_part = None
    psi: tuple = ()
    if case == "i":
        gap_ok = not any(abs(abs(x - y) - 2) <= 1e-7 for x in lam for y in lam)
        if gap_ok:
            predicted_part = SignPartition(tuple(sorted([x + 2 for x in lam] + [-2.0])), tuple(sorted(lam)))
        psi = tuple(sorted(set(lam) | {x + 2 for x in lam} | {-2.0}))
    predicted_sc = case == "i" and bool(gap_ok)
    cond_i = case == "i" and _condition_i(X1, X2, swap)
    printed = case == "i" and _is_integral(psi, tol.int_tol) and \
        _in_4z([x for x in psi if abs(x + 2) > 1e-7], tol.int_tol)
    alternative = case == "i" and _is_integral(lam, tol.int_tol) and _in_4z(lam, tol.int_tol)
    structural_pst = cond_i and predicted_sc and printed
    alternative_pst = cond_i and predicted_sc and alternative

    rel = minus_two_relation(nb, k1, k2)
    direct = check_pst(corr.line_dec, corr.f(k1), corr.f(k2), tol)

    notes = []
    expected_rel = {"i": "+", "ii": "-"}.get(case)
    if rel != expected_rel:
        notes.append(f"F_-2 relation from N is {rel!r}, the case analysis predicts {expected_rel!r}")
    direct_sc = direct.verdict != NONE
    if predicted_sc != direct_sc:
        notes.append(f"predicted strong cospectrality {predicted_sc}, direct {direct_sc}")
    if predicted_part is not None and direct.sign_partition is not None \
            and not _same_partition(predicted_part, direct.sign_partition):
        notes.append("sign partition differs from Psi- = Lambda_fab, Psi+ = (Lambda_fab + 2) u {-2}")
    if structural_pst != direct.is_pst:
        notes.append(f"integrality condition as printed predicts PST={structural_pst}, direct PST={direct.is_pst}")
    if alternative_pst != direct.is_pst:
        notes.append(f"sign-class reading (Lambda_fab in 4Z) predicts PST={alternative_pst}, direct PST={direct.is_pst}")
    return VPSTDecision((k1, k2), case, tuple(lam), gap_ok, predicted_sc, predicted_part, cond_i, printed,
                        alternative, structural_pst, alternative_pst, rel, direct, tuple(notes))


def vpst_scan(X1: Graph, X2: Graph, tol: Tolerances | None = None) -> list[VPSTDecision]:
    """vpst_decision for every edge pair of X1 x X2, in edge-id order."""
    tol = tol or DEFAULT
    nb = cartesian_null_basis(X1, X2)
    corr = line_correspondence(nb.product, tol)
    P = nb.product
    return [vpst_decision(X1, X2, k1, k2, tol, nb, corr)
            for k1 in range(P.m) for k2 in range(k1 + 1, P.m)]
