"""Acceptance criteria at full sample counts.

One test per criterion, each printing a PASS/FAIL line with the measured
extremes (run with -s to stream them).  Tolerances are fixed here and in
the suite implementations; nothing is calibrated at run time.  The whole
module takes a few minutes.
"""

import pytest

from coulink import verify as V

CRITERIA = [
    # 1: derivative of the 4-point determinant vs central differences
    #    (rel 1e-6) and the coplanar -32*S124*S234 form (abs 1e-10)
    ("01-cm-derivative", lambda: V.suite_cm_derivative(seed=101, n=1000)),
    # 2: determinant equals 288 V^2 (rel 1e-9); regular tetrahedron gives 4
    ("02-cm-volume", lambda: V.suite_cm_volume(seed=102, n=1000)),
    # 3: all 25 constraint-gradient signs on 1000 convex pentagons
    ("03-sign-table", lambda: V.suite_sign_table(seed=103, n=1000)),
    # 4: slice monotonicity signs and strict convexity of the restriction,
    #    closed form and differences, on 1000 interior slice points
    ("04-slice-calculus", lambda: V.suite_slice_calculus(seed=104, n=1000)),
    # 5: 100 random (linkage, charges): one strict grid minimum on 200x200,
    #    20-start descent spread within 1e-6
    (
        "05-uniqueness",
        lambda: V.suite_uniqueness(seed=105, cases=100, grid=(200, 200), starts=20),
    ),
    # 6: equilateral linkage, unit charges: regular pentagon to 1e-8,
    #    energy 5/phi to 1e-9
    ("06-equilateral-anchor", V.suite_equilateral_anchor),
    # 7: 1000 stabilizations: AC < 0, positive (s, t), residual <= 1e-8,
    #    minimization round trip to 1e-6, regular-pentagon anchor (1,1)
    ("07-stabilizer", lambda: V.suite_stabilizer(seed=107, n=1000)),
    # 8: 1000 convex quadrilaterals: unique positive t, residual <= 1e-8,
    #    square anchor t = 1 to 1e-9
    ("08-quadrilateral", lambda: V.suite_quadrilateral(seed=108, n=1000)),
    # 9: 1000 convex pentagons with opposite-sign controlling charges are
    #    never critical (residual > 1e-6)
    ("09-mixed-sign", lambda: V.suite_mixed_sign(seed=109, n=1000)),
    # 10: 50 navigation pairs at 100 steps: endpoint error <= 1e-5, all
    #     steps convex, step doubling moves the endpoint <= 1e-7; identity
    #     navigation is constant
    ("10-navigation", lambda: V.suite_navigation(seed=110, pairs=50, steps=100)),
    # 11: 20 cases, 500 boundary samples each: tangential-gradient norm
    #     stays above 1e-6
    ("11-boundary", lambda: V.suite_boundary(seed=111, cases=20, samples=500)),
]


@pytest.mark.parametrize("label,runner", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(label, runner):
    result = runner()
    print(result.line())
    assert result.passed, result.detail
