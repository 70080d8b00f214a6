from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

from iterintent.core import normalize_assignment
from iterintent.errors import EmptyInput, LengthMismatch
from iterintent.metrics import (
    ContingencyTable,
    ari,
    cluster_prf,
    clustering_accuracy,
    evaluate,
    intents_found,
    nmi,
)

from oracles import oracle_best_matching_accuracy

# Hand-computed fixtures. Derivations:
#  - anticorrelated 2x2: all n_ij = 1, sum_ij = 0, sum_a = sum_b = 2,
#    pairs = 6 -> ARI = (0 - 2/3)/(2 - 2/3) = -1/2; I(Y;C) = 0 -> NMI = 0.
#  - 3x3 case (gold [0,0,0,1,1,2] vs pred [0,0,1,1,1,2]):
#    I = log 2, H(Y) = H(C) = (2/3)log2 + (1/2)log3,
#    ARI = (2 - 16/15)/(4 - 16/15) = 7/22, best matching = 5/6.
F6_NMI = math.log(2) / (2 / 3 * math.log(2) + 0.5 * math.log(3))


def test_identical_relabeled_partition():
    gold, pred = [0, 0, 1, 1], [5, 5, 9, 9]
    assert nmi(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert cluster_prf(gold, pred) == pytest.approx((1.0, 1.0, 1.0), abs=1e-9)
    assert intents_found(gold, pred) == 2


def test_anticorrelated_partition():
    gold, pred = [0, 0, 1, 1], [0, 1, 0, 1]
    assert nmi(gold, pred) == pytest.approx(0.0, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(-0.5, abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(0.5, abs=1e-9)


def test_single_giant_cluster():
    gold, pred = [0, 0, 1, 1], [0, 0, 0, 0]
    assert nmi(gold, pred) == pytest.approx(0.0, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(0.0, abs=1e-9)
    precision, recall, f1 = cluster_prf(gold, pred)
    assert precision == pytest.approx(0.5, abs=1e-9)
    assert recall == pytest.approx(1.0, abs=1e-9)
    assert f1 == pytest.approx(2 / 3, abs=1e-9)


def test_all_singleton_prediction():
    gold, pred = [0, 0, 1, 1], [0, 1, 2, 3]
    precision, recall, f1 = cluster_prf(gold, pred)
    assert precision == pytest.approx(1.0, abs=1e-9)
    assert recall == pytest.approx(0.5, abs=1e-9)
    assert f1 == pytest.approx(2 / 3, abs=1e-9)
    assert nmi(gold, pred) == pytest.approx(2 / 3, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(0.0, abs=1e-9)


def test_degenerate_both_constant():
    gold, pred = [0, 0, 0], [7, 7, 7]
    assert nmi(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(1.0, abs=1e-9)


def test_degenerate_both_all_singletons():
    gold, pred = [0, 1, 2], [5, 6, 7]
    assert ari(gold, pred) == pytest.approx(1.0, abs=1e-9)
    assert nmi(gold, pred) == pytest.approx(1.0, abs=1e-9)


def test_three_class_fixture():
    gold = [0, 0, 0, 1, 1, 2]
    pred = [0, 0, 1, 1, 1, 2]
    assert nmi(gold, pred) == pytest.approx(F6_NMI, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(7 / 22, abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(5 / 6, abs=1e-9)
    assert cluster_prf(gold, pred) == pytest.approx((5 / 6, 5 / 6, 5 / 6), abs=1e-9)
    assert intents_found(gold, pred) == 3


def test_noise_scored_as_singletons():
    gold = [0, 0, 1, 1, 2]
    pred = [0, 0, 0, 0, -1]
    # noise point becomes its own cluster: table [[2,0],[2,0],[0,1]]
    assert nmi(gold, pred) == pytest.approx(0.6434709124204981, abs=1e-9)
    assert ari(gold, pred) == pytest.approx(2 / 7, abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(0.6, abs=1e-9)
    assert cluster_prf(gold, pred) == pytest.approx((0.6, 1.0, 0.75), abs=1e-9)
    assert intents_found(gold, pred) == 1  # plurality tie on cluster 0 -> class 0


def test_noise_drop_policy():
    gold = [0, 0, 1, 1, 2]
    pred = [0, 0, 0, 0, -1]
    # dropping the noise point leaves the one-cluster fixture on 4 points
    assert nmi(gold, pred, noise="drop") == pytest.approx(0.0, abs=1e-9)
    assert cluster_prf(gold, pred, noise="drop")[0] == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(EmptyInput):
        nmi([0, 1], [-1, -1], noise="drop")


def test_intents_found_edges():
    assert intents_found([0, 0, 1, 1, 2], [-1] * 5) == 0
    assert intents_found([0, 0, 1], [4, 4, 4]) == 1


def test_error_conditions():
    with pytest.raises(LengthMismatch):
        nmi([0, 1], [0])
    with pytest.raises(EmptyInput):
        ari([], [])
    with pytest.raises(LengthMismatch):
        intents_found([0], [0, 1])


def test_contingency_table_sums():
    table = ContingencyTable.from_labels([0, 0, 1, 1, 2], [0, 0, 1, 1, 1])
    assert table.n == 5
    assert table.counts.sum() == 5
    assert table.row_sums.tolist() == [2, 2, 1]
    assert table.col_sums.tolist() == [2, 3]


labels_pairs = st.integers(min_value=2, max_value=40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 4), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
    )
)


@settings(max_examples=60, deadline=None)
@given(labels_pairs)
def test_matches_sklearn_on_noise_free_labels(pair):
    gold, pred = pair
    assert nmi(gold, pred) == pytest.approx(
        normalized_mutual_info_score(gold, pred), abs=1e-9)
    assert ari(gold, pred) == pytest.approx(
        adjusted_rand_score(gold, pred), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(labels_pairs)
def test_accuracy_matches_enumeration_oracle(pair):
    gold, pred = pair
    assert clustering_accuracy(gold, pred) == pytest.approx(
        oracle_best_matching_accuracy(gold, pred), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(labels_pairs, st.randoms(use_true_random=False))
def test_relabel_invariance(pair, rnd):
    gold, pred = pair
    gold_values = sorted(set(gold))
    pred_values = sorted(set(pred))
    gold_perm = dict(zip(gold_values, rnd.sample(gold_values, len(gold_values))))
    pred_perm = dict(zip(pred_values, rnd.sample(pred_values, len(pred_values))))
    gold2 = [gold_perm[g] for g in gold]
    pred2 = [pred_perm[p] for p in pred]
    assert nmi(gold, pred) == pytest.approx(nmi(gold2, pred2), abs=1e-9)
    assert ari(gold, pred) == pytest.approx(ari(gold2, pred2), abs=1e-9)
    assert clustering_accuracy(gold, pred) == pytest.approx(
        clustering_accuracy(gold2, pred2), abs=1e-9)
    assert cluster_prf(gold, pred) == pytest.approx(
        cluster_prf(gold2, pred2), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(labels_pairs)
def test_symmetry_and_ranges(pair):
    gold, pred = pair
    assert nmi(gold, pred) == pytest.approx(nmi(pred, gold), abs=1e-9)
    assert ari(gold, pred) == pytest.approx(ari(pred, gold), abs=1e-9)
    assert 0.0 <= nmi(gold, pred) <= 1.0
    assert -1.0 <= ari(gold, pred) <= 1.0
    precision, recall, f1 = cluster_prf(gold, pred)
    for v in (precision, recall, f1, clustering_accuracy(gold, pred)):
        assert 0.0 <= v <= 1.0


def test_evaluate_report_fields():
    gold = ["a", "a", "b", "b", "c"]
    pred = normalize_assignment([0, 0, 1, 1, -1])
    report = evaluate(gold, pred)
    assert report.intents_total == 3
    assert report.intents_found == 2
    assert report.num_clusters == 2
    assert report.noise_fraction == pytest.approx(0.2)
    assert set(report.to_dict()) == {
        "nmi", "ari", "acc", "precision", "recall", "f1",
        "intents_total", "intents_found", "num_clusters", "noise_fraction",
    }


def test_evaluate_accepts_string_gold():
    report = evaluate(["x", "x", "y"], [3, 3, 8])
    assert report.nmi == pytest.approx(1.0)
    assert report.ari == pytest.approx(1.0)
