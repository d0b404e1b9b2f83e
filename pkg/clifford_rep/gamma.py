"""Gamma matrices for signature (t, s), timelike rotation and the spin reflection J_M.

Generators are built by the Pauli tensor recursion, so every entry is one of
0, +-1, +-i and the algebraic identities hold exactly.
"""

from __future__ import annotations

from functools import reduce
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.errors import SignatureError
from core.linalg import dagger, max_abs

DEFAULT_SEED = 20240607

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class Signature(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: int = Field(ge=0)
    s: int = Field(ge=0)

    @model_validator(mode="after")
    def _nonempty(self) -> "Signature":
        if self.t + self.s < 1:
            raise ValueError("signature needs t + s >= 1")
        return self

    @property
    def n(self) -> int:
        return self.t + self.s

    @property
    def rep_dim(self) -> int:
        return 2 ** (self.n // 2)

    @property
    def kappa(self) -> np.ndarray:
        """Metric signs: -1 on timelike directions, +1 on spacelike ones."""

        return np.array([-1.0] * self.t + [1.0] * self.s)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        try:
            t_raw, s_raw = text.split(",")
            return cls(t=int(t_raw), s=int(s_raw))
        except ValueError as exc:
            raise SignatureError(f"signature must look like 't,s' with t+s >= 1, got {text!r}") from exc


class CliffordRep(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    signature: Signature
    gamma_e: List[np.ndarray]
    gamma: List[np.ndarray]

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.signature.kappa)

    @property
    def metric_e(self) -> np.ndarray:
        return np.eye(self.signature.n)

    @property
    def reflection(self) -> np.ndarray:
        return np.diag(self.signature.kappa)

    @property
    def timelike_projection(self) -> np.ndarray:
        return np.diag([1.0] * self.signature.t + [0.0] * self.signature.s)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(v, dtype=float), np.array(self.gamma), axes=1)

    def apply_euclidean(self, v: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(v, dtype=float), np.array(self.gamma_e), axes=1)


class SpinSymmetry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    signature: Signature
    reflection_residual: float


class ResidualReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    signature: Signature
    seed: int
    samples: int
    residuals: Dict[str, float]
    tolerance: float
    passed: bool
    violations: List[str] = Field(default_factory=list)


def _hermitian_generators(n: int) -> Tuple[List[np.ndarray], int]:
    generators: List[np.ndarray] = []
    dim = 1
    for _ in range(n // 2):
        identity = np.eye(dim, dtype=np.complex128)
        generators = [np.kron(g, PAULI_Z) for g in generators] + [np.kron(identity, PAULI_X), np.kron(identity, PAULI_Y)]
        dim *= 2
    if n % 2 == 1:
        k = n // 2
        product = reduce(np.matmul, generators, np.eye(dim, dtype=np.complex128))
        generators.append(((-1j) ** k) * product)
    return generators, dim


def generate_gamma_E(n: int) -> List[np.ndarray]:
    """Anti-self-adjoint generators with g_j g_k + g_k g_j = -2 delta_jk, dimension 2^(n//2)."""

    if n < 1:
        raise SignatureError(f"need n >= 1 generators, got {n}")
    generators, _ = _hermitian_generators(n)
    return [1j * g for g in generators]


def rotate_representation(gamma_e: List[np.ndarray], signature: Signature) -> CliffordRep:
    if signature.t > signature.n or len(gamma_e) != signature.n:
        raise SignatureError(f"signature ({signature.t},{signature.s}) does not match {len(gamma_e)} generators")
    gamma = [(-1j) * g if j < signature.t else g.copy() for j, g in enumerate(gamma_e)]
    return CliffordRep(signature=signature, gamma_e=list(gamma_e), gamma=gamma)


def build_rep(signature: Signature) -> CliffordRep:
    return rotate_representation(generate_gamma_E(signature.n), signature)


def _sample_vectors(n: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(samples, n))


def verify_mixed_relation(rep: CliffordRep, samples: int = 100, seed: int = DEFAULT_SEED) -> float:
    """Max residual of gamma(v) gamma(w)* + gamma(w)* gamma(v) = 2 g_E(v, w)."""

    n = rep.signature.n
    identity = np.eye(rep.signature.rep_dim)
    frame = np.eye(n)
    pairs = [(frame[j], frame[k]) for j in range(n) for k in range(n)]
    rng_vectors = _sample_vectors(n, 2 * samples, seed)
    pairs += [(rng_vectors[2 * i], rng_vectors[2 * i + 1]) for i in range(samples)]
    worst = 0.0
    for v, w in pairs:
        gv = rep.apply(v)
        gw_star = dagger(rep.apply(w))
        residual = gv @ gw_star + gw_star @ gv - 2.0 * float(v @ w) * identity
        worst = max(worst, max_abs(residual))
    return worst


def square_relation_residual(rep: CliffordRep, samples: int = 1000, seed: int = DEFAULT_SEED) -> float:
    n = rep.signature.n
    identity = np.eye(rep.signature.rep_dim)
    kappa = rep.signature.kappa
    vectors = np.vstack([np.eye(n), _sample_vectors(n, samples, seed)])
    worst = 0.0
    for v in vectors:
        gv = rep.apply(v)
        worst = max(worst, max_abs(gv @ gv + float(np.sum(kappa * v * v)) * identity))
    return worst


def euclidean_relation_residual(rep: CliffordRep) -> float:
    identity = np.eye(rep.signature.rep_dim)
    worst = 0.0
    for j, gj in enumerate(rep.gamma_e):
        worst = max(worst, max_abs(dagger(gj) + gj))
        for k, gk in enumerate(rep.gamma_e):
            target = -2.0 * identity if j == k else 0.0 * identity
            worst = max(worst, max_abs(gj @ gk + gk @ gj - target))
    return worst


def fundamental_symmetry(rep: CliffordRep) -> SpinSymmetry:
    """J_M = i^{t(t-1)/2} gamma(e_1)...gamma(e_t), with its reflection residual on frame vectors."""

    t = rep.signature.t
    if t == 0:
        raise SignatureError("J_M needs at least one timelike direction")
    dim = rep.signature.rep_dim
    product = reduce(np.matmul, rep.gamma[:t], np.eye(dim, dtype=np.complex128))
    matrix = (1j ** (t * (t - 1) // 2)) * product
    sign = (-1.0) ** t
    kappa = rep.signature.kappa
    worst = 0.0
    for j, gj in enumerate(rep.gamma):
        reflected = kappa[j] * gj
        worst = max(worst, max_abs(matrix @ gj @ matrix - sign * reflected))
    return SpinSymmetry(matrix=matrix, signature=rep.signature, reflection_residual=worst)


def rotation_square_residual(rep: CliffordRep) -> float:
    """(1 - T - iT)^2 = r as diagonal matrices."""

    proj = rep.timelike_projection
    rotation = np.eye(rep.signature.n) - proj - 1j * proj
    return max_abs(rotation @ rotation - rep.reflection)


def clifford_suite(signature: Signature, samples: int = 1000, seed: int = DEFAULT_SEED, tol: float = 1e-12) -> ResidualReport:
    rep = build_rep(signature)
    identity = np.eye(signature.rep_dim)
    residuals: Dict[str, float] = {
        "euclidean_relation": euclidean_relation_residual(rep),
        "square_relation": square_relation_residual(rep, samples, seed),
        "mixed_relation": verify_mixed_relation(rep, samples, seed),
        "rotation_square": rotation_square_residual(rep),
    }
    if signature.t >= 1:
        spin = fundamental_symmetry(rep)
        residuals["spin_selfadjoint"] = max_abs(dagger(spin.matrix) - spin.matrix)
        residuals["spin_involution"] = max_abs(spin.matrix @ spin.matrix - identity)
        residuals["spin_reflection"] = spin.reflection_residual
    violations = sorted(name for name, value in residuals.items() if not value <= tol)
    return ResidualReport(
        signature=signature,
        seed=seed,
        samples=samples,
        residuals=residuals,
        tolerance=tol,
        passed=not violations,
        violations=violations,
    )


def all_signatures(n_max: int) -> List[Signature]:
    return [Signature(t=t, s=n - t) for n in range(1, n_max + 1) for t in range(n + 1)]


__all__ = [
    "DEFAULT_SEED",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "Signature",
    "CliffordRep",
    "SpinSymmetry",
    "ResidualReport",
    "generate_gamma_E",
    "rotate_representation",
    "build_rep",
    "verify_mixed_relation",
    "square_relation_residual",
    "euclidean_relation_residual",
    "fundamental_symmetry",
    "rotation_square_residual",
    "clifford_suite",
    "all_signatures",
]
