import io
import random

import pytest

from ursa.cnf import CnfInstance
from ursa.sat import export_dimacs, read_dimacs, write_dimacs
from ursa.sat.dimacs import ENUMERATE_COMMENT


def test_exact_format():
    inst = CnfInstance(2, [[1, 2], [-1, 2]], [])
    assert export_dimacs(inst) == "p cnf 2 2\n1 2 0\n-1 2 0\n"


def test_independent_map_comments():
    inst = CnfInstance(3, [[1, -3]], [(("nT", 0, 1), 0, 1), (("nT", 0, 1), 1, 2), (("b",), 0, 3)])
    text = export_dimacs(inst, all_solutions=True)
    lines = text.splitlines()
    assert lines[:3] == ["c ursa independent nT[0][1] 0 1", "c ursa independent nT[0][1] 1 2",
                         "c ursa independent b 0 3"]
    assert lines[3] == ENUMERATE_COMMENT
    assert lines[4:] == ["p cnf 3 1", "1 -3 0"]
    assert read_dimacs(text)[2] == [("nT[0][1]", 0, 1), ("nT[0][1]", 1, 2), ("b", 0, 3)]


def test_empty_instance():
    assert export_dimacs(CnfInstance(4, [], [])) == "p cnf 4 0\n"


def test_round_trip_with_an_independent_reader():
    rng = random.Random(0)
    for _ in range(50):
        nv = rng.randint(1, 30)
        clauses = [[rng.choice((1, -1)) * v for v in rng.sample(range(1, nv + 1), rng.randint(1, min(5, nv)))]
                   for _ in range(rng.randint(0, 40))]
        buf = io.StringIO()
        write_dimacs(CnfInstance(nv, clauses, []), buf)
        # minimal reader written from the format description alone
        header = None
        parsed = []
        for line in buf.getvalue().splitlines():
            if line.startswith("c"):
                continue
            if line.startswith("p"):
                header = tuple(map(int, line.split()[2:]))
                continue
            nums = list(map(int, line.split()))
            assert nums[-1] == 0
            parsed.append(nums[:-1])
        assert header == (nv, len(clauses))
        assert sorted(map(tuple, parsed)) == sorted(map(tuple, clauses))
        assert read_dimacs(buf.getvalue())[:2] == (nv, clauses)


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 2\n1 2 0\n",
    "p dnf 2 1\n1 0\n",
])
def test_reader_rejects_malformed_input(text):
    with pytest.raises(ValueError):
        read_dimacs(text)
