from fractions import Fraction

from cayley_dirac.lattice import LatticeGeometry, MassVector

F = Fraction

# 20 rational parameter sets (n in {1,2}), all with h*m*omega_j outside {0,1}.
_PARAM_ROWS = [
    ("1", "1/2", ("1",)),          # the anchor case
    ("1", "-1/3", ("1",)),
    ("1/2", "3/2", ("1",)),
    ("1/3", "2", ("1",)),
    ("2", "1/3", ("1",)),
    ("1", "2", ("1",)),
    ("3/2", "1/2", ("1",)),
    ("1", "1/2", ("-1",)),
    ("2/3", "-3/4", ("1",)),
    ("1", "5", ("1",)),
    ("5/7", "7/10", ("1",)),
    ("1", "-2", ("-1",)),
    ("1", "1/2", ("3/5", "4/5")),
    ("1", "5/2", ("3/5", "4/5")),
    ("1/2", "1/2", ("5/13", "12/13")),
    ("1", "-1/2", ("3/5", "4/5")),
    ("2", "1/4", ("4/5", "3/5")),
    ("1", "3", ("5/13", "12/13")),
    ("1/3", "3/2", ("8/17", "15/17")),
    ("1", "1/2", ("-3/5", "4/5")),
]


def audit_parameter_sets() -> list[tuple[LatticeGeometry, MassVector]]:
    out = []
    for h, m, omega in _PARAM_ROWS:
        geometry = LatticeGeometry(len(omega), F(h))
        mass = MassVector(F(m), tuple(F(w) for w in omega))
        for w in mass.omega:
            alpha = geometry.h * mass.m * w
            assert alpha not in (0, 1), f"bad parameter row {h},{m},{omega}"
        out.append((geometry, mass))
    return out
