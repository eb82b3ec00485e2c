"""Certificate search by linear programming over a dictionary of squares.

The cone element h1 is written as sum_I s_I(x) prod_{i in I} f_i(x) where
each SOS multiplier s_I is a nonnegative combination of squares drawn from a
fixed dictionary (monomials up to degree m1/2 and pairwise sums/differences
of them).  With the dictionary fixed, searching for h = 1 + h1 + h2 with
minimal max |coefficient| is a linear program; vertex solutions are sparse,
which keeps the emitted certificates small.  Gram matrices of the blocks are
diagonal in the dictionary basis; extraction still goes through an
eigendecomposition with negative eigenvalues clipped at -1e-9, so any other
Gram source can reuse the same path.

Soundness is entirely the verifier's concern: this module only reports the
numeric residual max |coeff(1 + h1 + h2)| of the solution it found.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, hstack, lil_matrix, vstack

from .poly import Poly, decimal_str, parse_coeff

# subset sizes of f whose products enter the cone; 5 is the smallest size
# whose degree reaches the degree-7 minors of the target systems
SUBSET_SIZES = (0, 1, 2, 5)
CLIP = -1e-9
WEIGHT_FLOOR = 1e-12
MAX_VARIABLES = 5


@dataclass
class RawCertificate:
    system_id: str
    variables: tuple
    m1: int
    m2: int
    sos: dict  # subset key "i,j,..." -> list of squared-term poly strings
    t: list  # one multiplier string per equality
    solver_status: str
    residual: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "system_id": self.system_id,
                "variables": list(self.variables),
                "m1": self.m1,
                "m2": self.m2,
                "sos": self.sos,
                "t": self.t,
                "solver_status": self.solver_status,
                "residual": self.residual,
            },
            indent=1,
        )


def parse_system(source):
    """ConstraintSystem JSON (text, dict, or path) -> (id, vars, f, g, r)."""
    if isinstance(source, (str, Path)) and Path(str(source)).is_file():
        source = Path(source).read_text()
    if isinstance(source, str):
        source = json.loads(source)
    varz = tuple(source["variables"])
    f = [Poly.parse(s, varz) for s in source["f"]]
    g = [Poly.parse(s, varz) for s in source["g"]]
    return source.get("system_id", ""), varz, f, g, parse_coeff(source["r"])


def square_dictionary(variables, half_degree):
    """Polynomials to be squared: monomials up to half_degree and pairwise
    sums/differences of distinct ones."""
    base = [Poly.constant(1, variables)]
    xs = [Poly.variable(v, variables) for v in variables]
    for deg in range(1, half_degree + 1):
        for combo in itertools.combinations_with_replacement(range(len(xs)), deg):
            p = Poly.constant(1, variables)
            for i in combo:
                p = p * xs[i]
            base.append(p)
    out = list(base)
    for a in range(len(base)):
        for b in range(a + 1, len(base)):
            out.append(base[a] - base[b])
            out.append(base[a] + base[b])
    return out


def _monomial_basis(variables, degree):
    out = [Poly.constant(1, variables)]
    xs = [Poly.variable(v, variables) for v in variables]
    for deg in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(range(len(xs)), deg):
            p = Poly.constant(1, variables)
            for i in combo:
                p = p * xs[i]
            out.append(p)
    return out


def _poly_string(coeff_by_exps, poly_vars, ref: Poly) -> str:
    parts = []
    for exps in sorted(coeff_by_exps, key=lambda e: (sum(e), e), reverse=True):
        c = coeff_by_exps[exps]
        if c == 0.0:
            continue
        name = ref.monomial_name(exps)
        parts.append(decimal_str(c) + (" * " + name if name else ""))
    return " + ".join(parts) if parts else "0"


def generate(system, m1: int = 2, m2: int = 0,
             subset_sizes=None) -> RawCertificate:
    """Search for a numeric certificate that P(f) and Z(g) are disjoint.

    Returns a RawCertificate whose `residual` is the max absolute
    coefficient of 1 + h1 + h2 at the numeric solution; small residuals
    (roughly < 1e-8) indicate the certificate is worth verifying exactly.
    On solver failure the status is recorded and sos/t are empty.
    """
    sid, varz, fs, gs, _r = parse_system(system)
    if len(varz) > MAX_VARIABLES:
        raise ValueError("too many variables for the certificate search")
    one = Poly.constant(1, varz)
    if subset_sizes is None:
        subset_sizes = [k for k in SUBSET_SIZES if k <= len(fs)]
    sq = square_dictionary(varz, m1 // 2)
    sq_sq = [q * q for q in sq]
    subsets = [I for k in subset_sizes
               for I in itertools.combinations(range(len(fs)), k)]
    cols = []
    for I in subsets:
        prod = one
        for i in I:
            prod = prod * fs[i]
        for qi, q2 in enumerate(sq_sq):
            cols.append((I, qi, q2 * prod))
    tbasis = _monomial_basis(varz, m2)
    tcols = [(j, k, mono * g)
             for j, g in enumerate(gs) for k, mono in enumerate(tbasis)]

    monos = {(0,) * len(varz): 0}
    for _, _, p in itertools.chain(cols, tcols):
        for e in p.terms:
            monos.setdefault(e, len(monos))
    nm, nc, nt = len(monos), len(cols), len(tcols)
    A = lil_matrix((nm, nc + nt))
    for ci, (_, _, p) in enumerate(itertools.chain(cols, tcols)):
        for e, c in p.terms.items():
            A[monos[e], ci] = float(c)
    A = A.tocsr()
    b = np.zeros(nm)
    b[0] = 1.0

    # minimize eps subject to |A x + b| <= eps, x_cone >= 0
    ones = csr_matrix(np.ones((nm, 1)))
    A_ub = vstack([hstack([A, -ones]), hstack([-A, -ones])]).tocsr()
    b_ub = np.concatenate([-b, b])
    c_obj = np.zeros(nc + nt + 1)
    c_obj[-1] = 1.0
    bounds = [(0, None)] * nc + [(None, None)] * nt + [(0, None)]
    res = linprog(c_obj, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0 or res.x is None:
        return RawCertificate(sid, varz, m1, m2, {}, [],
                              f"solver_failed({res.status}): {res.message}",
                              float("inf"))
    x = res.x
    residual = float(np.abs(A @ x[:-1] + b).max())

    # per-subset diagonal Gram in the dictionary basis -> squared terms
    sos = {}
    for bi, I in enumerate(subsets):
        w = x[bi * len(sq):(bi + 1) * len(sq)]
        if w.max(initial=0.0) <= WEIGHT_FLOOR:
            continue
        gram = np.diag(w)
        eigval, eigvec = np.linalg.eigh(gram)
        terms = []
        for k in range(len(eigval)):
            lam = eigval[k]
            if lam < CLIP:
                raise ValueError(f"Gram eigenvalue {lam} below clip threshold")
            lam = max(lam, 0.0)
            if lam <= WEIGHT_FLOOR:
                continue
            scale = math.sqrt(lam)
            coeffs = {}
            for di in range(len(sq)):
                v = eigvec[di, k]
                if v == 0.0:
                    continue
                for e, c in sq[di].terms.items():
                    coeffs[e] = coeffs.get(e, 0.0) + scale * v * float(c)
            text = _poly_string(coeffs, varz, one)
            if text != "0":
                terms.append(text)
        if terms:
            sos[",".join(str(i) for i in I)] = terms

    t_strings = []
    for j in range(len(gs)):
        coeffs = {}
        for idx, (jj, k, _) in enumerate(tcols):
            if jj != j:
                continue
            c = x[nc + idx]
            if abs(c) <= WEIGHT_FLOOR:
                continue
            for e, base_c in tbasis[k].terms.items():
                coeffs[e] = coeffs.get(e, 0.0) + c * float(base_c)
        t_strings.append(_poly_string(coeffs, varz, one))

    return RawCertificate(sid, varz, m1, m2, sos, t_strings,
                          "optimal", residual)


def batch(systems_dir, out_dir, schedule=((2, 0), (2, 1)),
          solved_tol: float = 1e-8, log=print):
    """Generate certificates for every system file, trying the schedule of
    (m1, m2) stages in order per system.

    Idempotent: systems whose certificate file already exists are skipped.
    Per-file failures are recorded, not fatal.  Returns (and writes to
    out_dir/summary.json) a summary with the solved stage per system and the
    list of unsolved systems.
    """
    systems_dir = Path(systems_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"solved": {}, "skipped": [], "unsolved": [], "errors": {}}
    for path in sorted(systems_dir.glob("*.json")):
        stem = path.stem
        target = out_dir / f"{stem}.json"
        if target.exists():
            summary["skipped"].append(stem)
            continue
        try:
            best = None
            for m1, m2 in schedule:
                cert = generate(path, m1=m1, m2=m2)
                if best is None or cert.residual < best.residual:
                    best = cert
                if cert.residual <= solved_tol:
                    break
            if best.residual <= solved_tol:
                target.write_text(best.to_json())
                summary["solved"][stem] = [best.m1, best.m2, best.residual]
                if log:
                    log(f"{stem}: solved at (m1={best.m1}, m2={best.m2}), "
                        f"residual {best.residual:.2e}")
            else:
                summary["unsolved"].append(stem)
                if log:
                    log(f"{stem}: unsolved, best residual {best.residual:.2e}")
        except Exception as exc:  # noqa: BLE001 - per-file isolation
            summary["errors"][stem] = repr(exc)
            if log:
                log(f"{stem}: error {exc!r}")
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1))
    return summary
