"""Small buildings used as worked examples and test fixtures."""
from __future__ import annotations

from .building import (
    ExplicitBuilding,
    GraphProductBuilding,
    ProductBuilding,
    ThinBuilding,
    graph_product_building,
    product_building,
)
from .coxeter import INF, CoxeterMatrix, CoxeterSystem, dihedral, new_system

FANO_LINES = tuple(tuple(sorted((i % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7))


def system(rank: int, pairs: dict, names) -> CoxeterSystem:
    return new_system(CoxeterMatrix.from_pairs(rank, pairs), names)


def d_infinity() -> CoxeterSystem:
    return dihedral(INF)


def s3() -> CoxeterSystem:
    return dihedral(3)


def c2xc2() -> CoxeterSystem:
    return dihedral(2)


def a3() -> CoxeterSystem:
    return system(3, {(0, 1): 3, (1, 2): 3, (0, 2): 2}, "rst")


def a_tilde2() -> CoxeterSystem:
    return system(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3}, "abc")


def rank3_right_angled() -> CoxeterSystem:
    """(C2 x C2) * C2: r and t commute, s is free against both."""
    return system(3, {(0, 1): INF, (1, 2): INF, (0, 2): 2}, "rst")


def c2_x_dinf() -> CoxeterSystem:
    """t commutes with r and s, and rs has infinite order."""
    return system(3, {(0, 1): INF, (0, 2): 2, (1, 2): 2}, "rst")


def fano_building() -> ExplicitBuilding:
    """Flags of the Fano plane: a building of type A2 with 21 chambers and thickness 3."""
    flags = [(p, n) for n, line in enumerate(FANO_LINES) for p in line]
    flags.sort()
    same_line: dict = {}
    same_point: dict = {}
    for c, (p, n) in enumerate(flags):
        same_line.setdefault(n, []).append(c)
        same_point.setdefault(p, []).append(c)
    labels = [f"{p}|{''.join(map(str, FANO_LINES[n]))}" for p, n in flags]
    return ExplicitBuilding(
        s3(), len(flags), [list(same_line.values()), list(same_point.values())], labels=labels
    )


def rank_one(n_chambers: int = 3, name: str = "u") -> ExplicitBuilding:
    """A single panel: the building of type A1 with the given thickness."""
    sys = new_system(CoxeterMatrix.from_rows([[1]]), [name])
    return ExplicitBuilding(sys, n_chambers, [[list(range(n_chambers))]])


def t33(radius: int) -> GraphProductBuilding:
    """The trivalent tree's chamber system: C3 * C3 acting on its own cosets."""
    return graph_product_building(2, [], [3, 3], radius, names="xy")


def rank3_graph_product(radius: int, sizes=(3, 3, 3)) -> GraphProductBuilding:
    return graph_product_building(3, [(0, 2)], sizes, radius, names="rst")


def product_example(radius: int = 6) -> ProductBuilding:
    """A thick building of type C2 x D-infinity: one 3-chamber panel times a T33 ball."""
    return product_building(rank_one(3), t33(radius))


def fano_times_t33(radius: int = 3) -> ProductBuilding:
    return product_building(fano_building(), t33(radius))


def thin_c2_x_dinf(radius: int) -> ThinBuilding:
    return ThinBuilding(c2_x_dinf(), radius)


def thin(system_: CoxeterSystem, radius: int) -> ThinBuilding:
    return ThinBuilding(system_, radius)


def product_example_action(bld: ProductBuilding):
    """A 3-cycle on the rank-one factor times C3 * C3 on the tree factor."""
    from .dynamics import PermutationAction, ProductAction, left_multiplication

    n = bld.first.n
    cycle = PermutationAction(bld.first, [[(c + 1) % n for c in range(n)]], ["z"])
    return ProductAction(bld, cycle, left_multiplication(bld.second))
