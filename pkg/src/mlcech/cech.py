"""Čech cochain complexes of finite covers and their exact cohomology."""

from itertools import combinations
from logging import getLogger
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from mlcech import linalg
from mlcech.errors import InconsistentDatumError
from mlcech.exact import ONE

logger = getLogger(__name__)

Face = Tuple[int, ...]


class Nerve(NamedTuple):
    """The nerve of a finite cover.

    Attributes:
        n_opens (int): The number of opens.
        faces (Tuple[Tuple[Face, ...], ...]): `faces[p]` lists the p-faces, each a
            sorted tuple of p + 1 open indices with nonempty intersection.
    """

    n_opens: int
    faces: Tuple[Tuple[Face, ...], ...]

    @classmethod
    def from_faces(cls, n_opens: int, faces: Sequence[Sequence[int]]) -> "Nerve":
        """Builds a nerve from a flat list of faces.

        Raises:
            ValueError: If a face repeats an index, uses an unknown open, or the
                faces are not closed under taking subfaces.
        """
        if n_opens < 1:
            raise ValueError(f"A cover needs at least one open, got {n_opens}")
        found = {(k,) for k in range(n_opens)}
        for face in faces:
            f = tuple(sorted(face))
            if not f or len(set(f)) != len(f):
                raise ValueError(f"Face {list(face)} is empty or repeats an index")
            if f[0] < 0 or f[-1] >= n_opens:
                raise ValueError(f"Face {list(face)} refers to an unknown open")
            found.add(f)
        for f in found:
            for k in range(len(f)):
                sub = f[:k] + f[k + 1 :]
                if sub and sub not in found:
                    raise ValueError(f"Face {f} is present but its subface {sub} is not")
        p_max = max(len(f) for f in found) - 1
        by_dim = tuple(
            tuple(sorted(f for f in found if len(f) == p + 1)) for p in range(p_max + 1)
        )
        return cls(n_opens, by_dim)

    @classmethod
    def full(cls, n_opens: int, p_max: Optional[int] = None) -> "Nerve":
        """The nerve of a cover whose intersections up to dimension `p_max` are
        all nonempty."""
        p_max = n_opens - 1 if p_max is None else min(p_max, n_opens - 1)
        faces = [
            f for p in range(p_max + 1) for f in combinations(range(n_opens), p + 1)
        ]
        return cls.from_faces(n_opens, faces)

    @property
    def p_max(self) -> int:
        return len(self.faces) - 1

    def all_faces(self) -> List[Face]:
        return [f for layer in self.faces for f in layer]

    def incidences(self, p: int) -> List[Tuple[Face, Face]]:
        """The pairs (σ, τ) with σ a p-face and τ a (p+1)-face containing it."""
        if p + 1 > self.p_max:
            return []
        return [
            (tau[:j] + tau[j + 1 :], tau)
            for tau in self.faces[p + 1]
            for j in range(len(tau))
        ]


class SheafDatum(NamedTuple):
    """A presheaf of finite-dimensional spaces on a nerve.

    Attributes:
        space (Dict[Face, int]): The dimension of the sections over each face.
        restriction (Dict[Tuple[Face, Face], np.ndarray]): For σ ⊂ τ with one
            more index, the d_τ x d_σ restriction matrix.
    """

    space: Dict[Face, int]
    restriction: Dict[Tuple[Face, Face], np.ndarray]

    def restrict(self, sigma: Face, tau: Face) -> np.ndarray:
        """The restriction from σ to τ ⊇ σ, identity when σ = τ."""
        if sigma == tau:
            return linalg.identity(self.space[sigma])
        return self.restriction[(sigma, tau)]

    def check(self, nerve: Nerve) -> None:
        """Validates shapes and that restrictions compose.

        Raises:
            InconsistentDatumError: If a space or matrix is missing or misshaped,
                or the two restriction paths from a face to a face with two more
                indices differ.
        """
        for face in nerve.all_faces():
            if self.space.get(face, -1) < 0:
                raise InconsistentDatumError(f"Face {face} has no space")
        for p in range(nerve.p_max):
            for sigma, tau in nerve.incidences(p):
                m = self.restriction.get((sigma, tau))
                if m is None:
                    raise InconsistentDatumError(f"Missing restriction {sigma} -> {tau}")
                shape = (self.space[tau], self.space[sigma])
                if m.shape != shape:
                    raise InconsistentDatumError(
                        f"Restriction {sigma} -> {tau} has shape {m.shape}, "
                        f"expected {shape}"
                    )
        for p in range(nerve.p_max - 1):
            for upsilon in nerve.faces[p + 2]:
                for i, j in combinations(range(len(upsilon)), 2):
                    sigma = tuple(x for k, x in enumerate(upsilon) if k not in (i, j))
                    tau1 = upsilon[:i] + upsilon[i + 1 :]
                    tau2 = upsilon[:j] + upsilon[j + 1 :]
                    path1 = linalg.matmul(
                        self.restrict(tau1, upsilon), self.restrict(sigma, tau1)
                    )
                    path2 = linalg.matmul(
                        self.restrict(tau2, upsilon), self.restrict(sigma, tau2)
                    )
                    if not linalg.is_zero(path1 - path2):
                        raise InconsistentDatumError(
                            f"Restrictions {sigma} -> {upsilon} through {tau1} and "
                            f"{tau2} differ"
                        )


class CochainComplex(NamedTuple):
    """C⁰ → C¹ → ... with `deltas[p]` the matrix of δ_p: C^p → C^{p+1}.

    The last differential maps into the zero space.
    """

    spaces: Tuple[int, ...]
    deltas: Tuple[np.ndarray, ...]


class CohomologyReport(NamedTuple):
    ranks: Tuple[int, ...]
    representatives: Optional[Tuple[Tuple[np.ndarray, ...], ...]] = None


def _offsets(nerve: Nerve, datum: SheafDatum, p: int) -> Tuple[Dict[Face, int], int]:
    offsets = {}
    total = 0
    for face in nerve.faces[p]:
        offsets[face] = total
        total += datum.space[face]
    return offsets, total


def build_complex(nerve: Nerve, datum: SheafDatum) -> CochainComplex:
    """The alternating Čech complex of `datum`.

    (δc)_{α₀…α_{p+1}} = Σ_j (−1)^j ρ(c_{α₀…α̂_j…α_{p+1}}).

    Args:
        nerve (Nerve): The nerve of the cover.
        datum (SheafDatum): The sections and restrictions.

    Raises:
        InconsistentDatumError: If the datum is inconsistent or δ∘δ != 0.

    Returns:
        A[n] `CochainComplex` with one differential per degree.
    """
    datum.check(nerve)
    layout = [_offsets(nerve, datum, p) for p in range(nerve.p_max + 1)]
    spaces = tuple(total for _, total in layout)
    deltas = []
    for p in range(nerve.p_max + 1):
        src, n_src = layout[p]
        if p == nerve.p_max:
            deltas.append(linalg.zeros(0, n_src))
            continue
        dst, n_dst = layout[p + 1]
        delta = linalg.zeros(n_dst, n_src)
        for tau in nerve.faces[p + 1]:
            r0 = dst[tau]
            for j in range(len(tau)):
                sigma = tau[:j] + tau[j + 1 :]
                block = datum.restrict(sigma, tau)
                c0 = src[sigma]
                rows, cols = block.shape
                sub = delta[r0 : r0 + rows, c0 : c0 + cols]
                delta[r0 : r0 + rows, c0 : c0 + cols] = (
                    sub + block if j % 2 == 0 else sub - block
                )
        deltas.append(delta)
    for p in range(len(deltas) - 1):
        if not linalg.is_zero(linalg.matmul(deltas[p + 1], deltas[p])):
            raise InconsistentDatumError(f"δ_{p + 1}∘δ_{p} is not zero")
    logger.debug(f"built cochain complex with spaces {spaces}")
    return CochainComplex(spaces, tuple(deltas))


def _representatives(cx: CochainComplex, p: int, count: int) -> Tuple[np.ndarray, ...]:
    """Cocycles of degree `p` that are independent modulo coboundaries."""
    cocycles = linalg.nullspace(cx.deltas[p])
    if p > 0:
        prev = cx.deltas[p - 1]
        span = [prev[:, k] for k in range(prev.shape[1])]
    else:
        span = []
    base = linalg.rank(np.array(span, dtype=object)) if span else 0
    chosen: List[np.ndarray] = []
    for z in cocycles:
        if len(chosen) == count:
            break
        trial = np.array(span + chosen + [z], dtype=object)
        if linalg.rank(trial) > base + len(chosen):
            chosen.append(z)
    return tuple(chosen)


def cohomology(cx: CochainComplex, representatives: bool = False) -> CohomologyReport:
    """The exact cohomology ranks dim ker δ_p − rank δ_{p−1}.

    Args:
        cx (CochainComplex): The complex.
        representatives (bool): If True, also return cocycle bases modulo
            coboundaries.

    Returns:
        A[n] `CohomologyReport`.
    """
    ranks_delta = [linalg.rank(d) for d in cx.deltas]
    ranks = []
    for p, dim in enumerate(cx.spaces):
        kernel = dim - ranks_delta[p]
        image = ranks_delta[p - 1] if p > 0 else 0
        if kernel < image:
            raise InconsistentDatumError(f"Image of δ_{p - 1} exceeds the kernel of δ_{p}")
        ranks.append(kernel - image)
    reps = None
    if representatives:
        reps = tuple(_representatives(cx, p, ranks[p]) for p in range(len(ranks)))
    logger.info(f"cohomology ranks {tuple(ranks)}")
    return CohomologyReport(tuple(ranks), reps)


def h0_equals_global_sections(nerve: Nerve, datum: SheafDatum, glued: int) -> bool:
    """Whether Ȟ⁰ of the datum has the expected number `glued` of global sections."""
    return cohomology(build_complex(nerve, datum)).ranks[0] == glued


def constant_sheaf(
    nerve: Nerve,
    components: Optional[Dict[Face, int]] = None,
    containment: Optional[Dict[Tuple[Face, Face], Sequence[int]]] = None,
) -> SheafDatum:
    """The constant sheaf, with one copy of the scalars per connected component.

    Args:
        nerve (Nerve): The nerve of the cover.
        components (Optional[Dict[Face, int]]): Components per face, 1 if absent.
        containment (Optional[Dict[Tuple[Face, Face], Sequence[int]]]): For σ ⊂ τ,
            the component of U_σ containing each component of U_τ; component 0
            if absent.

    Returns:
        A[n] `SheafDatum`.
    """
    components = components or {}
    containment = containment or {}
    space = {f: components.get(f, 1) for f in nerve.all_faces()}
    restriction = {}
    for p in range(nerve.p_max):
        for sigma, tau in nerve.incidences(p):
            into = containment.get((sigma, tau), [0] * space[tau])
            if len(into) != space[tau]:
                raise ValueError(f"Containment {sigma} -> {tau} needs {space[tau]} entries")
            m = linalg.zeros(space[tau], space[sigma])
            for row, comp in enumerate(into):
                if not 0 <= comp < space[sigma]:
                    raise ValueError(f"Face {sigma} has no component {comp}")
                m[row, comp] = ONE
            restriction[(sigma, tau)] = m
    return SheafDatum(space, restriction)


def circle_cover(arcs: int = 2) -> Tuple[Nerve, SheafDatum]:
    """The constant sheaf on a cover of the circle by `arcs` open arcs.

    Two arcs meet in two components; three or more arcs meet consecutively in
    one component each and have no triple intersections.
    """
    if arcs < 2:
        raise ValueError(f"A circle cover needs at least 2 arcs, got {arcs}")
    if arcs == 2:
        nerve = Nerve.from_faces(2, [(0, 1)])
        return nerve, constant_sheaf(nerve, components={(0, 1): 2})
    edges = [tuple(sorted((k, (k + 1) % arcs))) for k in range(arcs)]
    nerve = Nerve.from_faces(arcs, edges)
    return nerve, constant_sheaf(nerve)
