"""Tests for the Q-learning allocator"""
import numpy as np
import pytest
from models.assignment import Assignment
from models.learning import CONTINUING, EPISODIC, Hyperparams, QTable, State
from services import exact_service, qlearning_service, sinr_service
from utils.errors import AssignmentError, InfeasibleProblemError, ValidationError

PURE_EXPLORATION = dict(epsilon0=1.0, epsilon_min=1.0, epsilon_decay=1.0)


@pytest.fixture
def toy_env(toy_scene):
    return qlearning_service.AllocationEnvironment.from_scene(toy_scene, False)


class TestStateAndHyperparams:
    def test_user1_is_most_significant(self):
        assert State((1, 0, 0, 0)).index == 8
        assert State.from_index(8, 4).qos_bits == (1, 0, 0, 0)
        assert State.initial(3).index == 0

    def test_state_index_range(self):
        with pytest.raises(ValidationError):
            State.from_index(16, 4)

    @pytest.mark.parametrize('kwargs, key', [
        ({'alpha': 0.0}, 'ql.alpha'),
        ({'alpha': 1.5}, 'ql.alpha'),
        ({'gamma': 1.0}, 'ql.gamma'),
        ({'epsilon0': 0.5, 'epsilon_min': 0.6}, 'ql.epsilon_min'),
        ({'mode': 'batch'}, 'ql.mode'),
        ({'max_episodes': 0}, 'ql.max_episodes'),
        ({'rng_seed': -1}, 'ql.rng_seed'),
    ])
    def test_invalid_hyperparams(self, kwargs, key):
        with pytest.raises(ValidationError, match=key):
            Hyperparams(**kwargs)


class TestActionSpace:
    def test_reference_size_and_order(self):
        space = qlearning_service.build_action_space(4, 4, 4)
        assert len(space) == 43_680
        np.testing.assert_array_equal(space.matrix, exact_service.assignment_matrix(4, 4, 4))

    def test_small_space(self):
        space = qlearning_service.build_action_space(1, 2, 1)
        assert [a.pairs for a in space] == [((1, 1),), ((2, 1),)]

    def test_every_action_is_valid(self):
        space = qlearning_service.build_action_space(2, 2, 2)
        seen = set()
        for action in space:
            ok, _ = sinr_service.is_feasible(action, None)
            assert ok
            seen.add(action.pairs)
        assert len(seen) == len(space) == 12

    def test_too_many_users(self):
        with pytest.raises(InfeasibleProblemError):
            qlearning_service.build_action_space(3, 1, 2)


class TestEnvironment:
    def test_optimum_reward(self, toy_scene):
        solution = exact_service.solve_exact(toy_scene, False)
        reward, state = qlearning_service.env_step(solution.assignment, toy_scene, False)
        assert reward == solution.objective_linear
        assert state.qos_bits == (1, 1)

    def test_no_user_served(self, scene2):
        action = qlearning_service.build_action_space(4, 4, 4)[123]
        _, state = qlearning_service.env_step(action, scene2, True)
        assert state == State.initial(4)

    def test_single_evaluation_per_step(self, toy_scene, monkeypatch):
        calls = []
        original = sinr_service.evaluate_assignment

        def counting(*args, **kwargs):
            calls.append(args[0])
            return original(*args, **kwargs)

        monkeypatch.setattr(sinr_service, 'evaluate_assignment', counting)
        action = qlearning_service.build_action_space(2, 1, 4)[5]
        reward, _ = qlearning_service.env_step(action, toy_scene, False)
        assert len(calls) == 1
        assert reward == original(action, toy_scene, False).sum_sinr_linear

    def test_unassigned_user(self, toy_scene):
        with pytest.raises(AssignmentError, match='user 2'):
            qlearning_service.env_step(Assignment(((1, 1), None)), toy_scene, False)

    def test_deterministic(self, toy_scene):
        action = qlearning_service.build_action_space(2, 1, 4)[5]
        first = qlearning_service.env_step(action, toy_scene, True)
        assert qlearning_service.env_step(action, toy_scene, True) == first

    def test_table_matches_env_step(self, toy_scene, toy_env):
        for i, action in enumerate(toy_env.action_space):
            reward, state = qlearning_service.env_step(action, toy_scene, False)
            table_reward, table_state = toy_env.step(i)
            assert table_reward == pytest.approx(reward, rel=1e-12)
            assert table_state == state.index


class TestSelectAction:
    def test_full_exploration(self):
        q = QTable.zeros(1, 50)
        q.values[0, 0] = 1e6
        rng = np.random.default_rng(0)
        picks = [qlearning_service.select_action(q, 0, 1.0, rng) for _ in range(200)]
        assert picks.count(0) < 50
        assert len(set(picks)) > 20

    def test_greedy(self):
        q = QTable.zeros(1, 10)
        q.values[0, 6] = 2.0
        rng = np.random.default_rng(0)
        assert all(qlearning_service.select_action(q, 0, 0.0, rng) == 6 for _ in range(100))

    def test_ties_go_to_lowest_index(self):
        q = QTable.zeros(1, 10)
        q.values[0, [3, 7]] = 1.0
        assert qlearning_service.select_action(q, 0, 0.0, np.random.default_rng(0)) == 3

    def test_exploit_fraction(self):
        q = QTable.zeros(1, 1000)
        q.values[0, 5] = 1.0
        rng = np.random.default_rng(11)
        picks = np.array([
            qlearning_service.select_action(q, 0, 0.5, rng) for _ in range(10_000)
        ])
        assert np.mean(picks == 5) == pytest.approx(0.5, abs=0.02)

    def test_default_exploration_ignores_visit_counts(self):
        q = QTable.zeros(1, 1000)
        q.visit_counts[0, 1:] = 1
        rng = np.random.default_rng(5)
        picks = np.array([qlearning_service.select_action(q, 0, 1.0, rng) for _ in range(200)])
        assert np.mean(picks == 0) < 0.05
        assert len(set(picks.tolist())) > 150

    def test_prefers_untried_actions(self):
        q = QTable.zeros(1, 20)
        q.visit_counts[0, :] = 1
        q.visit_counts[0, 7] = 0
        rng = np.random.default_rng(3)
        assert all(
            qlearning_service.select_action(q, 0, 1.0, rng, explore_unvisited=True) == 7 for _ in range(50)
        )


class TestQUpdate:
    def test_first_update(self):
        q = QTable.zeros(2, 3)
        hp = Hyperparams(alpha=0.1, gamma=0.9)
        assert qlearning_service.q_update(q, 0, 1, 100.0, 1, hp) == pytest.approx(10.0)
        assert q.visit_counts[0, 1] == 1

    def test_full_learning_rate_continuing(self):
        q = QTable.zeros(2, 3)
        q.values[0, 2] = 123.0
        q.values[1] = [4.0, 9.0, 1.0]
        hp = Hyperparams(alpha=1.0, gamma=0.9, mode=CONTINUING)
        assert qlearning_service.q_update(q, 0, 2, 5.0, 1, hp) == 5.0 + 0.9 * 9.0

    def test_episodic_ignores_next_state(self):
        q = QTable.zeros(2, 3)
        q.values[1] = [50.0, 50.0, 50.0]
        hp = Hyperparams(alpha=1.0, mode=EPISODIC)
        assert qlearning_service.q_update(q, 0, 0, 7.0, 1, hp) == 7.0

    def test_geometric_rate(self):
        q = QTable.zeros(1, 1)
        hp = Hyperparams(alpha=0.1)
        reward = 5.0
        for m in range(1, 51):
            value = qlearning_service.q_update(q, 0, 0, reward, 0, hp)
            assert abs(value - reward) == pytest.approx(0.9 ** m * reward, rel=1e-9)


class TestPolicy:
    def test_single_nonzero_entry(self):
        q = QTable.zeros(4, 6)
        q.values[2, 4] = 0.5
        assert qlearning_service.extract_policy(q, State((1, 0))) == 4

    def test_policy_row(self):
        q = QTable.zeros(4, 3)
        q.visit_counts[3, :] = 5
        assert qlearning_service.policy_state(q, Hyperparams(mode=CONTINUING), 2).index == 3
        assert qlearning_service.policy_state(q, Hyperparams(), 2).index == 0


class TestTraining:
    def test_toy_matches_exact(self, toy_scene, toy_env):
        q, report = qlearning_service.train(toy_scene, Hyperparams(), False)
        solution = exact_service.solve_exact(toy_scene, False)

        assert report.converged
        assert report.episodes_run <= Hyperparams().max_episodes
        assert report.greedy_objective_linear == solution.objective_linear
        assert report.greedy_action_index == int(np.argmax(toy_env.rewards))
        assert report.meets_threshold
        assert q.values.shape == (4, 12)

    def test_pure_exploration_visits_everything(self, toy_scene):
        hp = Hyperparams(alpha=0.1, max_episodes=500, explore_unvisited=False, **PURE_EXPLORATION)
        q, report = qlearning_service.train(toy_scene, hp, True)
        assert np.all(q.visit_counts[0] > 0)
        assert report.episodes_run == 500
        assert report.final_epsilon == 1.0

    def test_episodic_fixed_point(self, toy_env):
        hp = Hyperparams(alpha=0.1, max_episodes=300, **PURE_EXPLORATION)
        q, _, _, _, _ = qlearning_service.train_environment(toy_env, hp)
        for a, reward in enumerate(toy_env.rewards):
            m = q.visit_counts[0, a]
            assert m > 0
            assert abs(q.values[0, a] - reward) == pytest.approx(0.9 ** m * reward, rel=1e-9)

    def test_continuing_fixed_point(self, toy_env):
        hp = Hyperparams(alpha=0.5, gamma=0.9, max_episodes=30_000, convergence_tol=1e-12,
                         mode=CONTINUING, explore_unvisited=False, rng_seed=5, **PURE_EXPLORATION)
        q, _, _, _, _ = qlearning_service.train_environment(toy_env, hp)
        r_max = float(toy_env.rewards.max())
        offset = hp.gamma * r_max / (1.0 - hp.gamma)

        well_visited = [s for s in range(q.n_states) if q.visit_counts[s].min() >= 50]
        assert 0 in well_visited
        for s in well_visited:
            np.testing.assert_allclose(q.values[s] - toy_env.rewards, offset, rtol=1e-3)
            assert int(np.argmax(q.values[s])) == int(np.argmax(toy_env.rewards))

        # Non-negative rewards from a zero start stay within [0, r_max / (1 - gamma)]
        assert q.values.min() >= 0.0
        assert q.values.max() <= r_max / (1.0 - hp.gamma) * (1 + 1e-9)

    def test_continuing_policy_matches_episodic(self, toy_scene):
        hp = Hyperparams(alpha=0.5, mode=CONTINUING, max_episodes=20_000)
        _, continuing = qlearning_service.train(toy_scene, hp, False)
        _, episodic = qlearning_service.train(toy_scene, Hyperparams(), False)
        assert continuing.greedy_action_index == episodic.greedy_action_index

    def test_reproducible(self, toy_scene):
        hp = Hyperparams(alpha=0.1, max_episodes=2000)
        q1, report1 = qlearning_service.train(toy_scene, hp, True)
        q2, report2 = qlearning_service.train(toy_scene, hp, True)
        np.testing.assert_array_equal(q1.values, q2.values)
        np.testing.assert_array_equal(q1.visit_counts, q2.visit_counts)
        assert report1 == report2

    def test_window_trace(self, toy_env):
        seen = []
        hp = Hyperparams(alpha=0.01, max_episodes=3500, window_size=1000, **PURE_EXPLORATION)
        _, episodes, converged, _, trace = qlearning_service.train_environment(
            toy_env, hp, on_window=lambda e, d: seen.append((e, d)))
        assert not converged
        assert episodes == 3500
        assert [e for e, _ in trace] == [1000, 2000, 3000]
        assert list(trace) == seen
