"""Tests for SINR evaluation, QoS bits and feasibility"""
from dataclasses import replace
import numpy as np
import pytest
from models.assignment import Assignment, SinrRow, SinrReport
from models.scene import UserPose
from services import channel_service, sinr_service
from utils.errors import AssignmentError
from utils.helpers import db_to_linear

SCENARIO1_DIAGONAL = Assignment(((1, 1), (2, 1), (3, 1), (4, 1)))
# Every user on the array-4 AP closest to it
SCENARIO2_NEAREST = Assignment(((4, 4), (4, 2), (4, 3), (4, 1)))


def report_with_db(values):
    rows = tuple(
        SinrRow(user_id=k, array_id=1, ap_id=k, signal_a2=1.0, interference_a2=0.0,
                noise_a2=1.0, sinr_linear=float(db_to_linear(v)), sinr_db=v)
        for k, v in enumerate(values, start=1)
    )
    return SinrReport(rows=rows, sum_sinr_linear=0.0, sum_sinr_db=0.0,
                      sum_user_sinr_db=0.0, steering_enabled=False)


class TestActiveAps:
    def test_single_user(self):
        assert sinr_service.active_aps(Assignment(((1, 1),))) == {(1, 1)}

    def test_four_users(self):
        assert sinr_service.active_aps(SCENARIO2_NEAREST) == {(4, 4), (4, 2), (4, 3), (4, 1)}

    def test_empty(self):
        assert sinr_service.active_aps(Assignment((None, None))) == set()

    def test_shared_ap_rejected(self):
        with pytest.raises(AssignmentError):
            sinr_service.active_aps(Assignment(((1, 1), (1, 1))))


class TestEvaluateAssignment:
    def test_lone_user_has_no_interference(self, scene1):
        scene = scene1.with_users([UserPose(user_id=1, position=(1.0, 1.0, 1.0))])
        row = sinr_service.sinr_of_user(1, Assignment(((1, 1),)), scene, False)
        assert row.interference_a2 == 0.0
        assert row.sinr_linear == pytest.approx(row.signal_a2 / row.noise_a2, rel=1e-12)

    def test_crowded_users_interfere(self, scene2):
        report = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, False)
        assert len(report.rows) == 4
        assert all(row.interference_a2 > 0.0 for row in report.rows)

    def test_row_invariants(self, scene2):
        for steering in (False, True):
            report = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, steering)
            for row in report.rows:
                assert row.signal_a2 >= 0.0 and row.interference_a2 >= 0.0 and row.noise_a2 > 0.0
                assert row.sinr_linear == pytest.approx(
                    row.signal_a2 / (row.interference_a2 + row.noise_a2), rel=1e-12)
                assert db_to_linear(row.sinr_db) == pytest.approx(row.sinr_linear, rel=1e-9)

    def test_doubling_power(self, scene2):
        base = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, False)
        doubled_scene = scene2.with_beam(scene2.beam.scaled(2.0))
        doubled = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, doubled_scene, False)

        for before, after in zip(base.rows, doubled.rows):
            expected = 4 * before.signal_a2 / (4 * before.interference_a2 + before.noise_a2)
            assert after.sinr_linear == pytest.approx(expected, rel=1e-9)
            assert after.sinr_linear > before.sinr_linear

    def test_sum_matches_rows(self, scene2):
        report = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, True)
        total = sinr_service.sum_sinr(SCENARIO2_NEAREST, scene2, True)
        assert total == pytest.approx(sum(row.sinr_linear for row in report.rows), rel=1e-12)
        assert report.sum_user_sinr_db == pytest.approx(sum(report.sinr_db), rel=1e-12)

    def test_symmetric_users_share_sinr(self, scene1):
        report = sinr_service.evaluate_assignment(SCENARIO1_DIAGONAL, scene1, False)
        first = report.rows[0].sinr_linear
        assert sinr_service.sum_sinr(SCENARIO1_DIAGONAL, scene1, False) == pytest.approx(4 * first, rel=1e-9)

    def test_one_user_sum(self, scene1):
        scene = scene1.with_users([UserPose(user_id=1, position=(1.0, 1.0, 1.0))])
        assignment = Assignment(((1, 2),))
        row = sinr_service.sinr_of_user(1, assignment, scene, True)
        assert sinr_service.sum_sinr(assignment, scene, True) == row.sinr_linear

    def test_unassigned_user(self, scene1):
        assignment = Assignment(((1, 1), None, (3, 1), (4, 1)))
        with pytest.raises(AssignmentError):
            sinr_service.sinr_of_user(2, assignment, scene1, False)
        with pytest.raises(AssignmentError):
            sinr_service.sum_sinr(assignment, scene1, False)

    def test_rejects_shared_ap(self, scene1):
        with pytest.raises(AssignmentError):
            sinr_service.evaluate_assignment(Assignment(((1, 1), (1, 1), (3, 1), (4, 1))), scene1, False)

    def test_rejects_unknown_ap(self, scene1):
        with pytest.raises(AssignmentError):
            sinr_service.evaluate_assignment(Assignment(((5, 1), (2, 1), (3, 1), (4, 1))), scene1, False)

    def test_rejects_wrong_user_count(self, scene1):
        with pytest.raises(AssignmentError):
            sinr_service.evaluate_assignment(Assignment(((1, 1),)), scene1, False)


class TestProperties:
    @pytest.mark.parametrize('steering', [False, True])
    def test_extra_interferer_never_helps(self, scene2, steering):
        partial = Assignment(SCENARIO2_NEAREST.pairs[:3] + (None,))
        before = sinr_service.evaluate_assignment(partial, scene2, steering)
        after = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, steering)
        for k in (1, 2, 3):
            assert after.row(k).sinr_linear <= before.row(k).sinr_linear

    @pytest.mark.parametrize('assignment, scene_name', [
        (SCENARIO1_DIAGONAL, 'scene1'),
        (SCENARIO2_NEAREST, 'scene2'),
    ])
    def test_steering_raises_signal(self, request, assignment, scene_name):
        scene = request.getfixturevalue(scene_name)
        off = sinr_service.evaluate_assignment(assignment, scene, False)
        on = sinr_service.evaluate_assignment(assignment, scene, True)
        for a, b in zip(off.rows, on.rows):
            assert b.signal_a2 >= a.signal_a2

        unsteered, steered = sinr_service.steering_gain(assignment, scene)
        assert unsteered == off and steered == on
        for db_off, db_on in zip(unsteered.sinr_db, steered.sinr_db):
            assert db_on > db_off

    def test_slot_isolation_removes_same_array_interference(self, scene2):
        isolated = replace(scene2, slot_isolation=True)
        report = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, isolated, False)
        default = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, False)
        assert all(row.interference_a2 == 0.0 for row in report.rows)
        for a, b in zip(default.rows, report.rows):
            assert b.sinr_linear >= a.sinr_linear

    def test_batch_matches_single(self, scene2):
        flat = [SCENARIO2_NEAREST.to_flat(4), (15, 14, 13, 12), (0, 5, 10, 15)]
        _, _, _, sinr = sinr_service.sinr_matrix(scene2, flat, True)
        for i, row in enumerate(flat):
            single = Assignment.from_flat(row, 4)
            report = sinr_service.evaluate_assignment(single, scene2, True)
            np.testing.assert_allclose(sinr[i], [r.sinr_linear for r in report.rows], rtol=1e-12)

    def test_threshold_conversion(self):
        assert db_to_linear(sinr_service.DEFAULT_THRESHOLD_DB) == pytest.approx(36.31, rel=1e-4)

    def test_tensor_is_single_source(self, scene1):
        report = sinr_service.evaluate_assignment(SCENARIO1_DIAGONAL, scene1, True)
        tensor = channel_service.link_power_tensor(scene1, True)
        assert report.row(2).signal_a2 == tensor[scene1.ap_index(2, 1), 1, 1]


class TestQos:
    def test_all_high(self):
        assert sinr_service.qos_vector(report_with_db([20.0] * 4)) == (1, 1, 1, 1)

    def test_all_low(self):
        assert sinr_service.qos_vector(report_with_db([0.0] * 4)) == (0, 0, 0, 0)

    def test_threshold_inclusive(self):
        assert sinr_service.qos_vector(report_with_db([15.6])) == (1,)

    def test_bits_are_per_user(self):
        base = sinr_service.qos_vector(report_with_db([20.0, 10.0, 20.0]))
        changed = sinr_service.qos_vector(report_with_db([20.0, 30.0, 20.0]))
        assert base[0] == changed[0] and base[2] == changed[2]
        assert (base[1], changed[1]) == (0, 1)


class TestFeasibility:
    def test_shared_ap(self):
        ok, violations = sinr_service.is_feasible(Assignment(((1, 1), (1, 1))), None)
        assert not ok
        assert [v.constraint for v in violations] == ['ap_shared']
        assert violations[0].ap == (1, 1)

    def test_unassigned_user(self):
        ok, violations = sinr_service.is_feasible(Assignment(((1, 1), None)), None)
        assert not ok
        assert violations[0].constraint == 'user_unassigned'
        assert violations[0].user_id == 2

    def test_all_above_threshold(self, scene1):
        report = sinr_service.evaluate_assignment(SCENARIO1_DIAGONAL, scene1, False)
        ok, violations = sinr_service.is_feasible(SCENARIO1_DIAGONAL, report, 15.6)
        assert ok and violations == []

    def test_below_threshold(self, scene2):
        report = sinr_service.evaluate_assignment(SCENARIO2_NEAREST, scene2, False)
        ok, violations = sinr_service.is_feasible(SCENARIO2_NEAREST, report, 15.6)
        assert not ok
        assert {v.constraint for v in violations} == {'sinr_below_threshold'}
        assert len(violations) == 4


class TestAssignmentEncoding:
    def test_flat_indices(self):
        assignment = Assignment.from_flat((0, 5, -1), 4)
        assert assignment.pairs == ((1, 1), (2, 2), None)
        assert assignment.to_flat(4) == (0, 5, -1)
        assert not assignment.is_complete

    def test_binary_tensor(self):
        tensor = Assignment(((1, 2), (2, 1))).to_tensor(2, 2)
        assert tensor == [
            [[0, 1], [0, 0]],
            [[0, 0], [1, 0]],
        ]
        # One AP per user
        assert all(sum(sum(array) for array in user) == 1 for user in tensor)

    def test_serving(self):
        assignment = Assignment(((3, 4), None))
        assert assignment.serving(1) == (3, 4)
        with pytest.raises(AssignmentError):
            assignment.serving(2)
        with pytest.raises(AssignmentError):
            assignment.serving(3)
