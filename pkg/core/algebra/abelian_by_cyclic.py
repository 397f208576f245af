"""
Abelian-by-cyclic groups.

G = Z^k x|_phi Z with t z t^-1 = phi(z). The pair (m, z) stands for
t^m z, so (m, z)(n, w) = (m + n, phi^-n(z) + w) and
(m, z)^-1 = (-m, -phi^m(z)). All arithmetic is exact; integer kernels
and lattice indices come from the Smith decomposition over ZZ.
"""

# Standard library imports
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
from sympy import (
    Matrix,
    Poly,
    cyclotomic_poly,
    factor_list,
    symbols,
    totient,
)
from sympy.core.intfunc import igcdex
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_decomp

# Local project imports
from core.errors import (
    InconsistentGeneratorsError,
    PeriodicMonodromyError,
    UnimodularityError,
)
from core.logger import logger

Rows = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]

TRIVIAL = "trivial"
FINITE_INDEX = "finite-index"
CANDIDATE_FINITE_HEIGHT = "candidate-finite-height"
NOT_FINITE_HEIGHT = "not-finite-height"
NOT_STRONGLY_QUASICONVEX = "not-strongly-quasiconvex"


@lru_cache(maxsize=4096)
def _power(rows: Rows, exponent: int) -> Rows:
    matrix = Matrix(rows)
    if exponent < 0:
        matrix = matrix.inv()
    result = matrix ** abs(exponent)
    return tuple(
        tuple(int(result[i, j]) for j in range(result.cols))
        for i in range(result.rows)
    )


@dataclass(frozen=True)
class IntMatrix:
    """
    Square integer matrix with determinant +1 or -1.

    Raises:
        UnimodularityError: On a non-square matrix or another determinant.
    """

    rows: Rows

    def __post_init__(self) -> None:
        size = len(self.rows)
        if size == 0 or any(len(row) != size for row in self.rows):
            raise UnimodularityError(f"matrix {self.rows} is not square")
        det = Matrix(self.rows).det()
        if abs(int(det)) != 1:
            raise UnimodularityError(
                f"matrix {self.rows} has determinant {det}, not +-1"
            )

    def __repr__(self) -> str:
        return f"IntMatrix({[list(row) for row in self.rows]})"

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> "IntMatrix":
        """Build from row-major entries; their count must be a square."""
        size = math.isqrt(len(entries))
        if size * size != len(entries) or size == 0:
            raise UnimodularityError(
                f"{len(entries)} entries do not form a square matrix"
            )
        values = [int(v) for v in entries]
        return cls(
            tuple(
                tuple(values[i * size : (i + 1) * size]) for i in range(size)
            )
        )

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        """Parse whitespace or comma separated row-major entries."""
        tokens = text.replace(",", " ").replace(";", " ").split()
        try:
            return cls.from_entries([int(token) for token in tokens])
        except ValueError as error:
            raise UnimodularityError(f"bad matrix literal {text!r}") from error

    @property
    def k(self) -> int:
        """Lattice dimension."""
        return len(self.rows)

    def power(self, exponent: int) -> Rows:
        """Rows of phi^exponent; negative exponents use the exact inverse."""
        return _power(self.rows, exponent)

    def apply(self, exponent: int, vector: Vector) -> Vector:
        """phi^exponent(vector)."""
        if exponent == 0:
            return tuple(vector)
        rows = self.power(exponent)
        return tuple(
            sum(a * b for a, b in zip(row, vector)) for row in rows
        )

    def conjugate(self, p: "IntMatrix") -> "IntMatrix":
        """P phi P^-1."""
        result = Matrix(p.rows) * Matrix(self.rows) * Matrix(p.rows).inv()
        return IntMatrix(
            tuple(
                tuple(int(result[i, j]) for j in range(self.k))
                for i in range(self.k)
            )
        )

    @property
    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.k))


@dataclass(frozen=True)
class AbcElement:
    """t^t_exp z with z = vec."""

    t_exp: int
    vec: Vector

    def __repr__(self) -> str:
        return f"AbcElement(t^{self.t_exp}, {list(self.vec)})"

    @property
    def is_trivial(self) -> bool:
        return self.t_exp == 0 and not any(self.vec)

    @classmethod
    def parse(cls, text: str) -> "AbcElement":
        """
        Parse "m:z1,z2,...", e.g. "1:0,0" for t or "0:1,0" for e1.

        Raises:
            InconsistentGeneratorsError: On a malformed literal.
        """
        head, sep, tail = text.partition(":")
        try:
            if not sep:
                raise ValueError("missing ':'")
            vec = tuple(int(v) for v in tail.replace(",", " ").split())
            return cls(int(head), vec)
        except ValueError as error:
            raise InconsistentGeneratorsError(
                f"bad element literal {text!r}: {error}"
            ) from error

    def literal(self) -> str:
        """Inverse of parse."""
        return f"{self.t_exp}:" + ",".join(str(v) for v in self.vec)


@dataclass(frozen=True)
class Classification:
    """
    Verdict on a finitely generated subgroup.

    Attributes:
        kind: One of trivial, finite-index, candidate-finite-height,
            not-finite-height, not-strongly-quasiconvex.
        index: Index in G for finite-index subgroups.
        height_bound: Height bound of a candidate cyclic subgroup.
        generator: Generator of the cyclic subgroup, if cyclic.
        lattice_rank: Rank of the intersection with Z^k.
    """

    kind: str
    index: Optional[int] = None
    height_bound: Optional[int] = None
    generator: Optional[AbcElement] = None
    lattice_rank: int = 0


class AbelianByCyclicGroup:
    """
    Group law of Z^k x|_phi Z.

    Attributes:
        phi (IntMatrix): Monodromy.
    """

    def __init__(self, phi: IntMatrix) -> None:
        self.phi = phi

    def __repr__(self) -> str:
        return f"AbelianByCyclicGroup({self.phi!r})"

    @property
    def identity(self) -> AbcElement:
        return AbcElement(0, (0,) * self.phi.k)

    def t(self, exponent: int = 1) -> AbcElement:
        """The stable letter raised to exponent."""
        return AbcElement(exponent, (0,) * self.phi.k)

    def z(self, vector: Sequence[int]) -> AbcElement:
        """A lattice element."""
        self._check_vector(tuple(vector))
        return AbcElement(0, tuple(int(v) for v in vector))

    def basis(self, index: int) -> AbcElement:
        """The standard basis vector e_index as an element."""
        vec = [0] * self.phi.k
        vec[index] = 1
        return AbcElement(0, tuple(vec))

    def _check_vector(self, vector: Vector) -> None:
        if len(vector) != self.phi.k:
            raise InconsistentGeneratorsError(
                f"vector {vector} does not have dimension {self.phi.k}"
            )

    def multiply(self, *elements: AbcElement) -> AbcElement:
        """Product of the elements, left to right."""
        m, z = 0, self.identity.vec
        for element in elements:
            self._check_vector(element.vec)
            shifted = self.phi.apply(-element.t_exp, z)
            m = m + element.t_exp
            z = tuple(a + b for a, b in zip(shifted, element.vec))
        return AbcElement(m, z)

    def inverse(self, element: AbcElement) -> AbcElement:
        moved = self.phi.apply(element.t_exp, element.vec)
        return AbcElement(-element.t_exp, tuple(-v for v in moved))

    def power(self, element: AbcElement, exponent: int) -> AbcElement:
        """element^exponent by repeated squaring."""
        base = element if exponent >= 0 else self.inverse(element)
        result = self.identity
        remaining = abs(exponent)
        while remaining:
            if remaining & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            remaining >>= 1
        return result

    def conjugate(self, g: AbcElement, h: AbcElement) -> AbcElement:
        """g h g^-1."""
        return self.multiply(g, h, self.inverse(g))

    def cyclic_exponent(
        self, element: AbcElement, generator: AbcElement
    ) -> Optional[int]:
        """q with generator^q == element, or None."""
        if generator.is_trivial:
            return 0 if element.is_trivial else None
        if generator.t_exp:
            q, rest = divmod(element.t_exp, generator.t_exp)
            if rest:
                return None
            return q if self.power(generator, q) == element else None
        if element.t_exp:
            return None
        pivot = next(i for i, v in enumerate(generator.vec) if v)
        q, rest = divmod(element.vec[pivot], generator.vec[pivot])
        if rest:
            return None
        scaled = tuple(q * v for v in generator.vec)
        return q if scaled == element.vec else None


def _smith(
    rows: Sequence[Sequence[int]], cols: int
) -> Tuple[List[int], Matrix]:
    """Nonzero Smith invariants of an integer matrix and its right factor."""
    matrix = DM([list(row) for row in rows], ZZ)
    smf, _, right = smith_normal_decomp(matrix)
    dense = smf.to_Matrix()
    invariants = [
        abs(int(dense[i, i]))
        for i in range(min(dense.rows, cols))
        if dense[i, i] != 0
    ]
    return invariants, right.to_Matrix()


def fixed_lattice(phi: IntMatrix, ell: int) -> List[Vector]:
    """
    Integer basis of ker(phi^ell - I).

    Args:
        phi (IntMatrix): Monodromy.
        ell (int): Nonzero exponent.

    Returns:
        List[Vector]: Empty iff phi^ell fixes no nonzero vector.

    Raises:
        ValueError: If ell is zero.
    """
    if ell == 0:
        raise ValueError("the exponent of a fixed lattice must be nonzero")
    rows = phi.power(ell)
    shifted = [
        [rows[i][j] - (1 if i == j else 0) for j in range(phi.k)]
        for i in range(phi.k)
    ]
    invariants, right = _smith(shifted, phi.k)
    return [
        tuple(int(right[i, j]) for i in range(phi.k))
        for j in range(len(invariants), phi.k)
    ]


def candidate_orders(k: int) -> List[int]:
    """All n with Euler phi(n) <= k, ascending."""
    return [n for n in range(1, 2 * k * k + 3) if int(totient(n)) <= k]


def periodic_order(phi: IntMatrix) -> Optional[int]:
    """Least l > 0 with a nonzero vector fixed by phi^l, or None."""
    for n in candidate_orders(phi.k):
        if fixed_lattice(phi, n):
            return n
    return None


def periodic_order_cyclotomic(phi: IntMatrix) -> Optional[int]:
    """Least n whose cyclotomic polynomial divides the characteristic one."""
    x = symbols("x")
    charpoly = Matrix(phi.rows).charpoly(x).as_expr()
    _, factors = factor_list(charpoly, x)
    orders = []
    for factor, _ in factors:
        poly = Poly(factor, x)
        if poly.LC() < 0:
            poly = -poly
        for n in candidate_orders(phi.k):
            if poly == Poly(cyclotomic_poly(n, x), x):
                orders.append(n)
                break
    return min(orders) if orders else None


def exists_proper_finite_height(phi: IntMatrix) -> bool:
    """True iff no power of phi fixes a nonzero vector."""
    return periodic_order(phi) is None


def _validate_generators(
    phi: IntMatrix, gens: Sequence[AbcElement]
) -> None:
    if not gens:
        raise InconsistentGeneratorsError("generator list is empty")
    for gen in gens:
        if len(gen.vec) != phi.k:
            raise InconsistentGeneratorsError(
                f"{gen!r} does not have dimension {phi.k}"
            )


def _bezout(values: Sequence[int]) -> Tuple[int, List[int]]:
    """gcd d >= 0 of values and coefficients a with sum a_i v_i = d."""
    d, coefficients = 0, []
    for value in values:
        x, y, g = igcdex(d, value)
        if g < 0:
            x, y, g = -x, -y, -g
        coefficients = [int(x) * c for c in coefficients] + [int(y)]
        d = int(g)
    return d, coefficients


def classify_finite_height_subgroup(
    phi: IntMatrix, gens: Sequence[AbcElement]
) -> Classification:
    """
    Classify the subgroup generated by gens.

    With d the gcd of the t-exponents and g0 an element of t-exponent d,
    the subgroup is g0 acting on N = span of phi^(jd)(c_i), where
    c_i = g_i g0^(-m_i/d). It has finite index iff d != 0 and N has
    full rank; it is cyclic iff N = 0.

    Raises:
        InconsistentGeneratorsError: On an empty or mixed-dimension list.
    """
    _validate_generators(phi, gens)
    group = AbelianByCyclicGroup(phi)
    if all(gen.is_trivial for gen in gens):
        return Classification(TRIVIAL)
    d, coefficients = _bezout([gen.t_exp for gen in gens])
    if d == 0:
        lattice = [gen.vec for gen in gens]
        g0 = group.identity
        step = 1
    else:
        g0 = group.multiply(
            *[group.power(gen, a) for gen, a in zip(gens, coefficients)]
        )
        lattice = [
            group.multiply(gen, group.power(g0, -gen.t_exp // d)).vec
            for gen in gens
        ]
        step = d
    spanning = [
        phi.apply(j * step, vec)
        for vec in lattice
        for j in range(phi.k if d else 1)
        if any(vec)
    ]
    if spanning:
        invariants, _ = _smith(
            [[vec[i] for vec in spanning] for i in range(phi.k)],
            len(spanning),
        )
    else:
        invariants = []
    rank = len(invariants)
    if d and rank == phi.k:
        index = d * math.prod(invariants)
        return Classification(FINITE_INDEX, index=index, lattice_rank=rank)
    if d and rank == 0:
        if periodic_order(phi) is None:
            return Classification(
                CANDIDATE_FINITE_HEIGHT,
                height_bound=d,
                generator=g0,
                lattice_rank=0,
            )
        return Classification(NOT_FINITE_HEIGHT, generator=g0)
    return Classification(NOT_FINITE_HEIGHT, lattice_rank=rank)


def subgroup_index(
    phi: IntMatrix, gens: Sequence[AbcElement]
) -> Optional[int]:
    """Index of the generated subgroup, or None if it is infinite."""
    return classify_finite_height_subgroup(phi, gens).index


def height_bound_cyclic(phi: IntMatrix, m: int) -> int:
    """
    Height bound of a cyclic subgroup generated by t^m z.

    Raises:
        PeriodicMonodromyError: If some power of phi fixes a vector.
        ValueError: If m is not positive.
    """
    if m <= 0:
        raise ValueError(f"t-exponent must be positive, got {m}")
    order = periodic_order(phi)
    if order is not None:
        raise PeriodicMonodromyError(
            f"phi^{order} fixes a nonzero vector; no height bound applies"
        )
    return m


def ball_conjugate_intersection(
    phi: IntMatrix, generator: AbcElement, g: AbcElement, radius: int
) -> List[int]:
    """
    Powers p, 0 < |p| <= radius, with g h^p g^-1 in <h>.

    Raises:
        ValueError: If radius < 1.
    """
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    group = AbelianByCyclicGroup(phi)
    hits = []
    for p in range(-radius, radius + 1):
        if p == 0:
            continue
        image = group.conjugate(g, group.power(generator, p))
        if group.cyclic_exponent(image, generator) is not None:
            hits.append(p)
    logger.debug(
        "Conjugate intersection of %r by %r: %d of %d powers",
        generator,
        g,
        len(hits),
        2 * radius,
    )
    return hits


def sq_classification(
    phi: IntMatrix, gens: Sequence[AbcElement]
) -> str:
    """Strong quasiconvexity: trivial, finite-index, or neither."""
    kind = classify_finite_height_subgroup(phi, gens).kind
    if kind in (TRIVIAL, FINITE_INDEX):
        return kind
    return NOT_STRONGLY_QUASICONVEX


def random_unimodular(
    k: int, steps: int, rng: np.random.Generator
) -> IntMatrix:
    """Product of at most steps random elementary matrices in GL_k(Z)."""
    matrix = Matrix.eye(k)
    for _ in range(int(rng.integers(0, steps + 1))):
        elementary = Matrix.eye(k)
        if k == 1 or rng.random() < 0.1:
            i = int(rng.integers(0, k))
            elementary[i, i] = -1
        else:
            i, j = (int(v) for v in rng.choice(k, size=2, replace=False))
            elementary[i, j] = 1 if rng.random() < 0.5 else -1
        matrix = matrix * elementary
    return IntMatrix(
        tuple(tuple(int(matrix[i, j]) for j in range(k)) for i in range(k))
    )
