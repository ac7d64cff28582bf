"""Shared corpus of small graded quiver algebras used across the suite."""

from koszulity import (
    AlgebraElement,
    Quiver,
    QuiverPresentation,
    betti_table,
    buchberger_truncated,
    graded_algebra_data,
    minimal_resolution,
)

CHAR = 32003


def element(quiver, spec, char=CHAR):
    """spec: iterable of (coeff, arrow-name tuple)."""
    e = AlgebraElement.zero(char)
    for coeff, names in spec:
        e = e + AlgebraElement.from_path(quiver.path(*names), char, coeff)
    return e


def presentation(vertices, arrows, relation_specs, char=CHAR):
    q = Quiver(vertices, arrows)
    rels = [element(q, spec, char) for spec in relation_specs]
    return QuiverPresentation(q, rels, char)


def loop_presentation(d, char=CHAR):
    """One loop x with x^d = 0."""
    return presentation(["v"], [("x", "v", "v")], [[(1, ("x",) * d)]], char)


def commuting_loops_presentation(char=CHAR):
    """Two loops with xy = yx (polynomial algebra in two variables)."""
    return presentation(
        ["v"],
        [("x", "v", "v"), ("y", "v", "v")],
        [[(1, ("x", "y")), (-1, ("y", "x"))]],
        char,
    )


def hereditary_a3_presentation(char=CHAR):
    """Path quiver 1 -> 2 -> 3 with no relations."""
    return presentation(["1", "2", "3"], [("b1", "1", "2"), ("b2", "2", "3")], [], char)


def semisimple_presentation(char=CHAR):
    """Two vertices, no arrows."""
    return presentation(["1", "2"], [], [], char)


PK34_VERTICES = ["1", "2", "3", "4", "5"]
PK34_ARROWS = [
    ("a1", "1", "2"),
    ("a2", "2", "3"),
    ("a3", "2", "3"),
    ("a4", "3", "4"),
    ("a5", "3", "4"),
    ("a6", "3", "4"),
    ("a7", "4", "5"),
]
PK34_RELATIONS = [
    [(1, ("a1", "a2")), (-1, ("a1", "a3"))],
    [(1, ("a4", "a7")), (-1, ("a5", "a7"))],
    [(1, ("a5", "a7")), (-1, ("a6", "a7"))],
    [(1, ("a2", "a4"))],
    [(1, ("a3", "a6"))],
]


def pk34_presentation(char=CHAR):
    """Five-vertex staircase algebra: classifies as PK(3, 4)."""
    return presentation(PK34_VERTICES, PK34_ARROWS, PK34_RELATIONS, char)


def algebra_of(pres, D, order=None):
    gb = buchberger_truncated(pres, order, D)
    return graded_algebra_data(gb, D)


def resolve(pres, N, D, order=None):
    alg = algebra_of(pres, D, order)
    res = minimal_resolution(alg, None, N=N, D=D)
    return alg, res


def classified(pres, N, D):
    from koszulity import classify

    _, res = resolve(pres, N, D)
    return classify(betti_table(res))


# (name, presentation builder, N, D, expected minimal (p, d) or None)
CORPUS = [
    ("pk34", pk34_presentation, 8, 9, (3, 4)),
    ("commuting_loops", commuting_loops_presentation, 6, 8, (2, 2)),
    ("loop_x2", lambda char=CHAR: loop_presentation(2, char), 6, 8, (2, 2)),
    ("loop_x3", lambda char=CHAR: loop_presentation(3, char), 6, 10, (2, 3)),
    ("loop_x4", lambda char=CHAR: loop_presentation(4, char), 6, 13, (2, 4)),
    ("hereditary_a3", hereditary_a3_presentation, 6, 8, (2, 2)),
]
