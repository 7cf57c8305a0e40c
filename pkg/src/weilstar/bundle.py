"""The Lagrangian Hilbert bundle, its connection, and the geometric Gauss sum.

The fiber over a Lagrangian L consists of the complex functions on W that
are covariant under translation by L through the bi-character:
f(w + z) = chi(w, z) f(w).  Fibers are stored as dense tables over W so
the covariance law is a checkable property rather than a structural
assumption.  The group acts by (tau_g f)(w) = f(w.g), carrying the fiber
over L to the fiber over g.L = L.g^-1.

The connection

    gamma_{L',L}(f)(w) = |L|^-1/2 |L n L'|^-1/2
                         sum_{z' in L'} conj(chi(w, z')) f(w + z')

maps E_L to E_{L'}; composing two connection maps reproduces a third up
to a scalar multiplier carried by the geometric Gauss sum

    S_W(L; L', L'') = sum_{z in L n (L' + L'')} chi(z', z''),
                      z = z' + z'', z' in L', z'' in L''.

``verify_connection`` checks the five connection properties (adjoint
symmetry, isometry, two-sided inversion, the multiplier composition law,
and equivariance) either exhaustively or on a seeded sample of triples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .groups import StarMatrix, sample_element
from .scalars import sqrt_nonneg_int
from .symplectic import Lagrangian, LagrangianTable, SelfDualModule


@dataclass
class FiberFunction:
    """A dense table over W tagged with the Lagrangian whose fiber it lives in."""

    lagrangian: Lagrangian
    table: np.ndarray

    def copy(self) -> "FiberFunction":
        return FiberFunction(self.lagrangian, self.table.copy())

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.table) ** 2))


class LagrangianBundle:
    """Fibers, inner product, group action and connection over one module."""

    def __init__(self, table: LagrangianTable):
        self.table = table
        self.module: SelfDualModule = table.module
        self._coset_cache: dict[int, np.ndarray] = {}
        self._basis_cache: dict[int, np.ndarray] = {}
        self._gamma_mat_cache: dict[tuple, np.ndarray] = {}
        self._tau_mat_cache: dict[tuple, tuple] = {}

    # -- fibers -----------------------------------------------------------

    def coset_reps(self, L: Lagrangian) -> np.ndarray:
        """Minimal canonical representative of each coset of L in W."""
        reps = self._coset_cache.get(L.id)
        if reps is None:
            mod = self.module
            covered = np.zeros(mod.n_vectors, dtype=bool)
            out = []
            zs = np.array(L.elements, dtype=np.int64)
            for w in range(mod.n_vectors):
                if not covered[w]:
                    out.append(w)
                    covered[mod.add_indices(np.full_like(zs, w), zs)] = True
            reps = np.array(out, dtype=np.int64)
            self._coset_cache[L.id] = reps
        return reps

    def basis_stack(self, L: Lagrangian) -> np.ndarray:
        """Stack of the coset basis functions f_r(r + z) = chi(r, z)."""
        stack = self._basis_cache.get(L.id)
        if stack is None:
            mod = self.module
            reps = self.coset_reps(L)
            zs = np.array(L.elements, dtype=np.int64)
            stack = np.zeros((reps.size, mod.n_vectors), dtype=np.complex128)
            for row, r in enumerate(reps):
                support = mod.add_indices(np.full_like(zs, r), zs)
                vals = np.array([mod.chi_index(int(r), int(z)) for z in zs])
                stack[row, support] = vals
            self._basis_cache[L.id] = stack
        return stack

    def fiber_basis(self, L: Lagrangian) -> list[FiberFunction]:
        return [FiberFunction(L, row.copy()) for row in self.basis_stack(L)]

    def is_in_fiber(self, f: FiberFunction, L: Lagrangian, tol: float = 1e-9) -> bool:
        """Exhaustive covariance check f(w+z) = chi(w,z) f(w) over W x L."""
        mod = self.module
        for z in L.elements:
            shifted = f.table[mod.add_col(int(z))]
            expected = mod.chi_col(int(z)) * f.table
            if np.max(np.abs(shifted - expected)) > tol:
                return False
        return True

    def inner(self, f: FiberFunction, h: FiberFunction) -> complex:
        if f.lagrangian.id != h.lagrangian.id:
            raise ValueError("inner product needs functions in the same fiber")
        return complex(np.sum(f.table * np.conj(h.table)))

    # -- group action -------------------------------------------------------

    def tau_stack(self, g: StarMatrix, stack: np.ndarray) -> np.ndarray:
        perm = self.module.perm_right(g)
        return stack[..., perm]

    def tau(self, g: StarMatrix, f: FiberFunction) -> FiberFunction:
        """(tau_g f)(w) = f(w.g), landing in the fiber over g.L."""
        target = self.table.act(g, f.lagrangian)
        return FiberFunction(target, f.table[self.module.perm_right(g)])

    # -- connection -----------------------------------------------------------

    def gamma_norm(self, Lp: Lagrangian, L: Lagrangian) -> float:
        inter = self.table.intersection_size(L, Lp)
        return 1.0 / sqrt_nonneg_int(L.size * inter)

    def gamma_stack(self, Lp: Lagrangian, L: Lagrangian, stack: np.ndarray) -> np.ndarray:
        mod = self.module
        out = np.zeros_like(stack)
        for z in Lp.elements:
            out += np.conj(mod.chi_col(int(z))) * stack[..., mod.add_col(int(z))]
        out *= self.gamma_norm(Lp, L)
        return out

    def gamma(self, Lp: Lagrangian, L: Lagrangian, f: FiberFunction) -> FiberFunction:
        if f.lagrangian.id != L.id:
            raise ValueError("gamma source fiber mismatch")
        return FiberFunction(Lp, self.gamma_stack(Lp, L, f.table))

    def stack_to_matrix(self, stack: np.ndarray, L: Lagrangian) -> np.ndarray:
        """Coordinates of a transformed basis stack in the coset basis of L.

        Column j holds the image of basis function j; because basis
        functions have disjoint coset supports and value 1 at their
        representative, coordinates are just values at the representatives.
        """
        reps = self.coset_reps(L)
        return stack[:, reps].T

    def gamma_matrix(self, Lp: Lagrangian, L: Lagrangian) -> np.ndarray:
        """Matrix of gamma_{L',L} from the coset basis of L to that of L'."""
        key = (Lp.id, L.id)
        mat = self._gamma_mat_cache.get(key)
        if mat is None:
            mat = self.stack_to_matrix(self.gamma_stack(Lp, L, self.basis_stack(L)), Lp)
            self._gamma_mat_cache[key] = mat
        return mat

    def tau_matrix(self, g: StarMatrix, L: Lagrangian) -> tuple[Lagrangian, np.ndarray]:
        """Target fiber g.L and the matrix of tau_g between coset bases."""
        key = (g.entries(), L.id)
        got = self._tau_mat_cache.get(key)
        if got is None:
            target = self.table.act(g, L)
            moved = self.tau_stack(g, self.basis_stack(L))
            got = (target, self.stack_to_matrix(moved, target))
            self._tau_mat_cache[key] = got
        return got

    def contraction_matrix(self, g: StarMatrix, L: Lagrangian) -> np.ndarray:
        """Matrix of gamma_{L, g.L} o tau_g on the coset basis of E_L."""
        gl, tau = self.tau_matrix(g, L)
        return self.gamma_matrix(L, gl) @ tau

    # -- geometric Gauss sum -----------------------------------------------

    def gauss_sum(
        self, L: Lagrangian, Lp: Lagrangian, Lpp: Lagrangian, reverse_scan: bool = False
    ) -> complex:
        """S_W(L; L', L'') with the first-fit decomposition in canonical order.

        Each z in L n (L' + L'') is split z = z' + z'' by scanning L' in
        canonical order (reversed when ``reverse_scan``, used to verify
        the sum does not depend on the decomposition).
        """
        mod = self.module
        lp_set = set(Lp.elements)
        lpp_set = set(Lpp.elements)
        arr_p = np.array(Lp.elements, dtype=np.int64)
        sums = set()
        for z in Lpp.elements:
            sums.update(mod.add_indices(arr_p, np.full_like(arr_p, z)).tolist())
        scan = list(Lp.elements)
        if reverse_scan:
            scan.reverse()
        total = 0.0 + 0.0j
        for z in L.elements:
            if z not in sums:
                continue
            for zp in scan:
                zpp = mod.sub_index(z, zp)
                if zpp in lpp_set:
                    total += mod.chi_index(zp, zpp)
                    break
            else:
                raise RuntimeError("element of L' + L'' failed to decompose")
        return total

    def multiplier(self, Lpp: Lagrangian, Lp: Lagrangian, L: Lagrangian) -> complex:
        """Scalar relating gamma_{L'',L'} o gamma_{L',L} to gamma_{L'',L}."""
        t = self.table
        num = t.intersection_size(Lpp, Lp)
        den = t.intersection_size(L, Lpp) * t.intersection_size(Lp, L) * L.size
        return (
            sqrt_nonneg_int(num)
            / sqrt_nonneg_int(den)
            * self.gauss_sum(L, Lp, Lpp)
        )

    # -- verification -----------------------------------------------------------

    def verify_connection(
        self,
        mode: str = "exhaustive",
        seed: int = 0,
        samples: int = 200,
        tol: float = 1e-8,
        group_elements: list[StarMatrix] | None = None,
    ) -> dict:
        """Check connection properties a)-e); returns a report dict.

        All five properties are evaluated on coset-basis matrices; the
        basis is exactly orthogonal with constant norm, so the matrix
        identities are equivalent to the function-level ones.
        """
        rng = random.Random(seed)
        lags = self.table.lagrangians
        ring = self.module.ring
        if mode == "exhaustive":
            pairs = [(L, Lp) for L in lags for Lp in lags]
            triples = [(L, Lp, Lpp) for L in lags for Lp in lags for Lpp in lags]
            if group_elements is None:
                group_elements = [
                    StarMatrix.w(ring),
                    StarMatrix.h(ring, ring.elements("units")[-1]),
                    StarMatrix.u(ring, ring.elements("symmetric")[-1]),
                ] + [sample_element(ring, rng) for _ in range(5)]
            equiv = [(g, L, Lp) for g in group_elements for (L, Lp) in pairs]
        elif mode == "sampled":
            pairs = [(rng.choice(lags), rng.choice(lags)) for _ in range(samples)]
            triples = [
                (rng.choice(lags), rng.choice(lags), rng.choice(lags))
                for _ in range(samples)
            ]
            if group_elements is None:
                group_elements = [sample_element(ring, rng) for _ in range(samples)]
            equiv = [
                (g, rng.choice(lags), rng.choice(lags)) for g in group_elements
            ]
        else:
            raise ValueError(f"unknown mode {mode!r}")

        checks = []

        def record(name, instances, worst, witnesses):
            checks.append(
                {
                    "property": name,
                    "instances": instances,
                    "max_deviation": worst,
                    "failures": witnesses,
                    "passed": worst <= tol,
                }
            )

        dim = self.module.n_points
        eye = np.eye(dim)

        # a) adjoint symmetry and b) isometry
        worst_a = worst_b = 0.0
        wit_a, wit_b = [], []
        for L, Lp in pairs:
            fwd = self.gamma_matrix(Lp, L)
            bwd = self.gamma_matrix(L, Lp)
            dev = float(np.max(np.abs(fwd - np.conj(bwd.T))))
            if dev > worst_a:
                worst_a = dev
            if dev > tol:
                wit_a.append({"L": L.id, "Lp": Lp.id, "deviation": dev})
            dev = float(np.max(np.abs(np.conj(fwd.T) @ fwd - eye)))
            if dev > worst_b:
                worst_b = dev
            if dev > tol:
                wit_b.append({"L": L.id, "Lp": Lp.id, "deviation": dev})
        record("a_adjoint_symmetry", len(pairs), worst_a, wit_a)
        record("b_isometry", len(pairs), worst_b, wit_b)

        # c) gamma_{L,L'} o gamma_{L',L} = id, both composition orders
        worst_c = 0.0
        wit_c = []
        for L, Lp in pairs:
            fwd = self.gamma_matrix(Lp, L)
            bwd = self.gamma_matrix(L, Lp)
            dev = max(
                float(np.max(np.abs(bwd @ fwd - eye))),
                float(np.max(np.abs(fwd @ bwd - eye))),
            )
            if dev > worst_c:
                worst_c = dev
            if dev > tol:
                wit_c.append({"L": L.id, "Lp": Lp.id, "deviation": dev})
        record("c_two_sided_inverse", len(pairs), worst_c, wit_c)

        # d) composition law with the Gauss-sum multiplier
        worst_d = 0.0
        wit_d = []
        for L, Lp, Lpp in triples:
            composed = self.gamma_matrix(Lpp, Lp) @ self.gamma_matrix(Lp, L)
            direct = self.gamma_matrix(Lpp, L)
            mu = self.multiplier(Lpp, Lp, L)
            dev = float(np.max(np.abs(composed - mu * direct)))
            if dev > worst_d:
                worst_d = dev
            if dev > tol:
                wit_d.append(
                    {"L": L.id, "Lp": Lp.id, "Lpp": Lpp.id, "deviation": dev}
                )
        record("d_composition_multiplier", len(triples), worst_d, wit_d)

        # e) equivariance under the group action
        worst_e = 0.0
        wit_e = []
        for g, L, Lp in equiv:
            gl, tau_l = self.tau_matrix(g, L)
            glp, tau_lp = self.tau_matrix(g, Lp)
            lhs = tau_lp @ self.gamma_matrix(Lp, L)
            rhs = self.gamma_matrix(glp, gl) @ tau_l
            dev = float(np.max(np.abs(lhs - rhs)))
            if dev > worst_e:
                worst_e = dev
            if dev > tol:
                wit_e.append({"L": L.id, "Lp": Lp.id, "deviation": dev})
        record("e_equivariance", len(equiv), worst_e, wit_e)

        return {
            "kind": "connection",
            "mode": mode,
            "lagrangians": len(lags),
            "checks": checks,
            "passed": all(c["passed"] for c in checks),
        }
