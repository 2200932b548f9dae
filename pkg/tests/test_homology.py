from fractions import Fraction

import pytest

from hochschild.algebra import Bimodule, identity_automorphism
from hochschild.chains import AlgebraContext, EndoContext, total_differential
from hochschild.families import (dilation, dual_numbers, koszul_dga, matrix_algebra, polynomial,
                                 truncated_polynomial)
from hochschild.homology import (ComplexError, HomBoundaries, Window, WindowError,
                                 assemble_chain_complex, assemble_cochain_complex,
                                 assemble_hom_complex, hkr_dims_oracle, homology_class,
                                 homology_table, num_threads)
from hochschild.linalg import complex_homology


@pytest.mark.parametrize("vars,top", [(1, 6), (2, 4)])
def test_hkr_dimensions(vars, top):
    A = polynomial(vars, top)
    report = homology_table(assemble_chain_complex(A, None, Window(top, top)))
    assert report.metadata["exact"] == "yes"
    for (i, w), (dim, _) in report.table.items():
        assert dim == hkr_dims_oracle(vars, i, w), (i, w)


def test_hkr_oracle_values():
    assert hkr_dims_oracle(1, 0, 3) == 1
    assert hkr_dims_oracle(1, 1, 3) == 1
    assert hkr_dims_oracle(1, 2, 3) == 0
    assert hkr_dims_oracle(2, 1, 3) == 6
    assert hkr_dims_oracle(2, 2, 1) == 0


def test_dual_numbers_tower():
    A = dual_numbers()
    report = homology_table(assemble_chain_complex(A, None, Window(6, 7)))
    assert report.by_index() == {0: 2, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}
    assert report.metadata["exact"] == "yes"


def test_twisted_chain_homology():
    A = polynomial(1, 6)
    M = Bimodule(A, identity_automorphism(A), dilation(A, 2))
    report = homology_table(assemble_chain_complex(A, M, Window(6, 6)))
    assert report.by_index() == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0}
    # the surviving class is the unit in weight 0
    assert report.dim(0, 0) == 1


def test_parallel_matches_serial(monkeypatch):
    A = polynomial(2, 3)
    w = Window(3, 3)
    serial = homology_table(assemble_chain_complex(A, None, w, workers=1))
    parallel = homology_table(assemble_chain_complex(A, None, w, workers=2))
    assert serial.table == parallel.table
    monkeypatch.setenv("HH_NUM_THREADS", "2")
    assert num_threads() == 2
    assert homology_table(assemble_chain_complex(A, None, w)).table == serial.table
    monkeypatch.setenv("HH_NUM_THREADS", "many")
    with pytest.raises(WindowError):
        num_threads()


def test_window_errors():
    with pytest.raises(WindowError):
        Window(0, 3)
    with pytest.raises(WindowError):
        Window(3, 0)
    A = polynomial(1, 4)
    with pytest.raises(WindowError):
        assemble_chain_complex(A, None, Window(3, 5))
    with pytest.raises(WindowError):
        assemble_cochain_complex(A, None, Window(3, 5))


def test_dga_rejected():
    with pytest.raises(ComplexError):
        assemble_chain_complex(koszul_dga(), None, Window(2, 2))


def test_cochain_complex_low_degrees():
    A = truncated_polynomial(3)
    sc = assemble_cochain_complex(A, None, Window(3, 2))
    report = homology_table(sc)
    # the center is all of A, once per map weight
    assert [report.dim(0, j) for j in (0, 1, 2)] == [1, 1, 1]
    # outer derivations x -> x and x -> x^2
    assert report.dim(1, 0) == 1 and report.dim(1, 1) == 1
    assert report.metadata["exact"] == "approximation"


def test_cochain_complex_matrix_algebra():
    # Morita invariance: HH^*(M_2(k)) is k in degree 0
    A = matrix_algebra(2)
    report = homology_table(assemble_cochain_complex(A, None, Window(3, 1)))
    assert sum(report.dim(0, j) for j in {j for _, j in report.table}) == 1
    assert all(d == 0 for (i, _), (d, _) in report.table.items() if i > 0)


def test_homology_class_of_boundary_and_cycle():
    A = polynomial(1, 4)
    sc = assemble_chain_complex(A, None, Window(2, 4))
    x, x2 = A.index("x"), A.index("x^2")
    # x^2 dx is a cycle in weight 3 and represents a nonzero class
    assert homology_class(sc, 1, 3, {(x2, x): 1})
    # b(1, x, x) = 2 (x, x) - (1, x^2)
    boundary = total_differential(AlgebraContext(A), {(A.unit, x, x): 1})
    assert boundary == {(x, x): 2, (A.unit, x2): -1}
    assert homology_class(sc, 1, 2, boundary) == {}
    with pytest.raises(ComplexError):
        homology_class(sc, 2, 2, {(A.unit, x, x): 1})


def test_report_formats():
    A = dual_numbers()
    report = homology_table(assemble_chain_complex(A, None, Window(2, 3)))
    csv = report.to_csv()
    assert csv.splitlines()[0] == "complex,homologicalIndex,internalDegree,dimension"
    assert len(csv.splitlines()) == 1 + len(report.table)
    md = report.to_markdown()
    assert "| index \\ degree |" in md and "- exact: yes" in md
    assert report.representatives_text(lambda k: A.labels[k]).count("\n") == sum(report.dims().values())


def test_hom_boundaries():
    A = dual_numbers()
    M = Bimodule(A)
    ctx = EndoContext(M)
    c = assemble_hom_complex(M, 2, [0], 0)
    groups = complex_homology(c)
    bounds = HomBoundaries(M, 2, 0, 0)
    # images of the incoming differential are boundaries, representatives are not
    for key in c.positions[-1]:
        image = total_differential(ctx, {key: 1})
        if image:
            assert bounds.contains(image)
            assert bounds.contains({k: Fraction(v, 3) for k, v in image.items()})
    for vec in groups[0].representatives:
        rep = {groups[0].basis[k]: v for k, v in vec.items()}
        assert not bounds.contains(rep)
