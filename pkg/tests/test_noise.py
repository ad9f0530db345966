import json

import numpy as np
import pytest

from lcplearn import (
    CX,
    H,
    X,
    Circuit,
    NoiseProfile,
    SecretString,
    estimate_asp,
    run_noisy,
    simulate,
)


class TestNoiseProfile:
    def test_zero_profile(self):
        profile = NoiseProfile.zero(3)
        assert profile.num_qubits == 3
        assert profile.cx_for(0, 1) == 0.0

    def test_quito_calibration_values(self):
        profile = NoiseProfile.quito()
        assert profile.readout_error == (3.81e-2, 4.11e-2, 7.17e-2, 3.41e-2, 3.62e-2)
        assert profile.cx_for(1, 3) == profile.cx_for(3, 1) == 1.044e-2
        assert profile.t1_us is not None  # ingested, unused by the model

    def test_published_averages(self):
        profile = NoiseProfile.quito_average()
        assert profile.cx_for(0, 1) == pytest.approx(1.080e-2)
        assert profile.readout_error[0] == pytest.approx(4.424e-2)
        # the averages match the per-edge/per-qubit table to rounding
        table = NoiseProfile.quito()
        assert np.mean(list(table.cx_error.values())) == pytest.approx(1.080e-2, abs=1e-4)
        assert np.mean(table.readout_error) == pytest.approx(4.424e-2, abs=1e-5)

    def test_json_round_trip(self, tmp_path):
        profile = NoiseProfile.quito()
        path = tmp_path / "noise.json"
        path.write_text(json.dumps(profile.to_dict()))
        recovered = NoiseProfile.from_json(str(path))
        assert recovered.cx_error == profile.cx_error
        assert recovered.readout_error == profile.readout_error
        assert recovered.single_qubit_error == profile.single_qubit_error

    def test_spec_document_shape(self):
        data = {
            "cx_error": {"0-1": 0.007401},
            "readout_error": [0.0381, 0.0411, 0.0717, 0.0341, 0.0362],
            "sq_error": [3.23e-4, 2.90e-4, 2.74e-4, 3.44e-4, 4.57e-4],
        }
        profile = NoiseProfile.from_dict(data)
        assert profile.cx_for(0, 1) == 0.007401

    def test_probability_range_validated(self):
        with pytest.raises(ValueError):
            NoiseProfile({}, (1.5,), (0.0,))

    def test_scaling_clips_at_one(self):
        profile = NoiseProfile.uniform(2, cx=0.6, readout=0.2, sq=0.0)
        scaled = profile.scaled(cx=3.0)
        assert scaled.cx_default == 1.0


def bell_circuit():
    return Circuit(2, [H(1), CX(1, 2)])


class TestRunNoisy:
    def test_zero_noise_matches_noiseless(self):
        circuit = bell_circuit()
        hist = run_noisy(circuit, NoiseProfile.zero(2), shots=4000, seed=1)
        assert set(hist) == {"00", "11"}
        assert abs(hist["00"] - 2000) < 200

    def test_certain_readout_flip(self):
        circuit = Circuit(2, [X(1)])
        profile = NoiseProfile({}, (0.0, 1.0), (0.0, 0.0))
        hist = run_noisy(circuit, profile, shots=100, seed=2)
        assert hist == {"11": 100}  # second bit always inverted

    def test_seeded_histograms_identical(self):
        circuit = bell_circuit()
        profile = NoiseProfile.uniform(2, cx=0.05, readout=0.03, sq=0.001)
        a = run_noisy(circuit, profile, shots=2000, seed=9)
        b = run_noisy(circuit, profile, shots=2000, seed=9)
        assert a == b

    def test_different_seeds_differ(self):
        circuit = bell_circuit()
        profile = NoiseProfile.uniform(2, cx=0.05, readout=0.03, sq=0.001)
        assert run_noisy(circuit, profile, 2000, seed=1) != run_noisy(circuit, profile, 2000, seed=2)

    def test_total_counts_equal_shots(self):
        hist = run_noisy(bell_circuit(), NoiseProfile.uniform(2, 0.1, 0.1, 0.01), 1234, seed=5)
        assert sum(hist.values()) == 1234

    def test_profile_too_small(self):
        with pytest.raises(ValueError):
            run_noisy(bell_circuit(), NoiseProfile.zero(1), 10, seed=0)

    def test_average_profile_band_on_transpiled_circuit(self):
        """Depolarizing CNOTs + readout flips keep success below 1, above 1/2."""
        from lcplearn.transpile import CouplingGraph, transpile
        from lcplearn import build_full_circuit

        s = SecretString.from_string("00")
        circuit, report = transpile(build_full_circuit(s), CouplingGraph.quito())
        hist = run_noisy(circuit, NoiseProfile.quito_average(), shots=40960, seed=123)
        target_positions = [(report.mapping[j], s.bits[j]) for j in range(2)]
        good = sum(
            c
            for key, c in hist.items()
            if all(key[pos] == str(bit) for pos, bit in target_positions)
        )
        assert 0.5 < good / 40960 < 1.0


class TestEstimateAsp:
    def test_noiseless_probability_is_exactly_one(self):
        for text in ("00", "11", "010"):
            report = estimate_asp(SecretString.from_string(text), trials=2, shots=256, seed=3)
            assert report.per_trial == (1.0, 1.0)
            assert report.mean == 1.0 and report.stddev == 0.0

    def test_protocol_shape(self):
        report = estimate_asp(SecretString.from_string("01"), trials=5, shots=64, seed=0)
        assert report.trials == 5 and report.shots == 64
        assert len(report.per_trial) == 5

    def test_seeded_runs_reproduce(self):
        profile = NoiseProfile.quito()
        a = estimate_asp(SecretString.from_string("10"), profile, trials=2, shots=512, seed=4)
        b = estimate_asp(SecretString.from_string("10"), profile, trials=2, shots=512, seed=4)
        assert a.per_trial == b.per_trial

    def test_monotone_under_common_random_numbers(self):
        """Scaling every error rate with a shared seed never helps the learner."""
        base = NoiseProfile.quito()
        s = SecretString.from_string("00")
        means = [
            estimate_asp(s, base.scaled(cx=k, readout=k, sq=k), trials=1, shots=2048, seed=6).mean
            for k in (0.5, 1.0, 2.0)
        ]
        assert means[0] + 5e-3 >= means[1] >= means[2] - 5e-3

    def test_odd_n_counts_either_last_bit(self):
        """Only the learned prefix matters: the tail query corrects bit 3."""
        from lcplearn.noise import _transpiled
        from lcplearn.transpile import CouplingGraph

        s = SecretString.from_string("110")
        _, report = _transpiled(str(s), CouplingGraph.quito())
        readout = [0.0] * 5
        readout[report.mapping[2]] = 1.0  # always flip the measured third bit
        profile = NoiseProfile({}, tuple(readout), (0.0,) * 5)
        asp = estimate_asp(s, profile, trials=1, shots=256, seed=8)
        assert asp.mean == 1.0

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            estimate_asp(SecretString.from_string("01"), trials=0, shots=1)


def test_error_injection_changes_distribution():
    """With certainty-one CX depolarizing, outcomes leave the clean support."""
    circuit = Circuit(2, [CX(1, 2)])  # identity on |00>
    profile = NoiseProfile.uniform(2, cx=1.0, readout=0.0, sq=0.0)
    hist = run_noisy(circuit, profile, shots=3000, seed=11)
    clean = simulate(circuit).dominant_outcome()
    assert clean == "00"
    assert set(hist) != {"00"}
    # 12 of the 15 two-qubit flips move probability off |00>
    assert hist.get("00", 0) / 3000 < 0.5
