"""
Explicit bounds for elliptic curves
===================================

Curve records carry the Galois-image data as inputs. From them we get the
bad-prime set, the adelic constant and the final bound on the entanglement
group, and a table of what the bound says about Kummer degrees at chosen
levels.
"""

from pathlib import Path

from torsionkummer.bounds import bound_for, cohomology_bound_mK, m_ell, ratio_divisor_table
from torsionkummer.records import ingest_record
from torsionkummer.report import bound_report_text

data = Path(__file__).resolve().parent.parent / "data" / "records"

# valuation sums over the smallest possible bad set
print("m_2 =", m_ell({2, 3, 5}, 2), " m_3 =", m_ell({2, 3, 5}, 3))

# the constant used for CM curves over a quadratic field
print("m_K for [K:Q] = 2:", cohomology_bound_mK(2))

for rec in ingest_record((data / "batch.json").read_text()):
    rep = bound_for(rec)
    rep.ratio_table = ratio_divisor_table(rep.final_bound, rep.rank, rep.torsion_dim, [2, 3, 11])
    print()
    print(bound_report_text(rep))
