"""Smoke test for the agreeable extension module.

Build and install first:  pip install ./crates/python   (or maturin develop)
"""
from fractions import Fraction

import agreeable

SEVEN_CANDIDATES = """{"n":7,"k":4,"j":3,"ballots":[
  {"list":[1,2,3],"count":7},
  {"list":[4,5,6],"count":2},{"list":[4,5,7],"count":2},
  {"list":[4,6,7],"count":2},{"list":[5,6,7],"count":2}]}"""


def main():
    p = agreeable.Params(7, 4, 3)
    assert (p.n, p.k, p.j, p.diameter) == (7, 4, 3, 3)
    assert p.committee_count() == 35

    dist = agreeable.VoterDistribution.from_json(SEVEN_CANDIDATES)
    value, winners, strategy = agreeable.best_committees(dist)
    assert value == Fraction(8, 15), value
    assert winners == [[4, 5, 6, 7]]
    assert agreeable.approval(dist, [1, 2, 3, 4]) == Fraction(7, 15)
    assert agreeable.theorem1_bound(p) == Fraction(4, 35)

    six = agreeable.Params(6, 4, 3)
    assert agreeable.distance([1, 2, 3], [1, 4, 5]) == 2
    assert agreeable.ring_size(six, 1) == 9
    assert len(agreeable.ball(six, [1, 2, 3], 2)) == 19
    assert agreeable.theorem2_bound(six, 1) == Fraction(1, 3)
    assert agreeable.corollary1_bound(six, 1, Fraction(1, 2)) == Fraction(1, 6)

    ub = agreeable.VoterDistribution.uniform_ball(six, [1, 2, 3], 2)
    assert agreeable.best_committees(ub)[0] == Fraction(4, 19)
    wc_value, weights, _ = agreeable.worst_case(six, 2)
    assert wc_value == Fraction(1, 5) and sum(weights) == 1

    conc = agreeable.VoterDistribution.concentric(six, [1, 2, 3], ["1/2", Fraction(1, 2)])
    assert conc.ring_weights([1, 2, 3]) == [Fraction(1, 2), Fraction(1, 2), 0, 0]
    proj = dist.project_concentric([1, 2, 3])
    assert agreeable.best_committees(dist)[0] >= agreeable.best_committees(proj)[0]

    passed, failures = agreeable.lemma4_check(six)
    assert passed and not failures

    try:
        agreeable.theorem2_bound(six, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("radius 2 is outside the hypothesis")

    print("smoke test ok")


if __name__ == "__main__":
    main()
