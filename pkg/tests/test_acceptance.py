"""The nine acceptance criteria, each at its stated runtime limit.

Every criterion is recorded for the summary printed at the end of the run.
"""

import time

import pytest

from anss_q2 import connecting
from anss_q2.verify import run_suite

CRITERIA = [
    (1, "adic", "valuation lemma", 1),
    (2, "eigen", "eigenstructure of g and h", 5),
    (3, "jpow", "delta0 / delta1 on powers of j", 30),
    (4, "vanishing", "vanishing of delta1 on c4^n and c4^(m-1) c6", 60),
    (5, "m13", "m = 13 golden block", 10),
    (6, "propcombo", "kernel and cokernel of every block, |m| <= 30", 300),
    (7, "dtilde", "d-tilde chase", 30),
    (8, "theorem-main", "E2 chart against the closed-form table, -40 <= t <= 80", 600),
    (9, "snf-oracle", "Smith normal form against enumeration", 120),
]


def _summarise(result):
    fails = result.failures
    if not fails:
        return ""
    head = "; ".join(f"{lab}: {det}" for lab, det in fails[:3])
    more = f" (+{len(fails) - 3} more)" if len(fails) > 3 else ""
    return head[:400] + more


@pytest.mark.slow
@pytest.mark.parametrize("num,suite,name,limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(num, suite, name, limit, acceptance_record):
    connecting._ANALYSIS_CACHE.clear()
    t0 = time.perf_counter()
    (result,) = run_suite(suite)
    seconds = time.perf_counter() - t0
    ok = result.passed and seconds < limit
    detail = _summarise(result) or ("" if seconds < limit else "over the time limit")
    acceptance_record[num] = (ok, name, seconds, limit, detail)
    print(f"criterion {num} {'PASS' if ok else 'FAIL'}  {name}  ({seconds:.1f} s)")
    assert result.passed, detail
    assert seconds < limit
