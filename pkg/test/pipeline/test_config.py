import unittest

from groupsense.pipeline import DetectorConfig, validate_config
from groupsense.similarity import Weights
from groupsense.utils.config_utils import merge_config


class DetectorConfigTest(unittest.TestCase):
    def test_defaults_valid(self) -> None:
        config = validate_config(DetectorConfig())
        self.assertEqual(config.granularity, "floor")
        self.assertEqual((config.phi_l, config.phi_u), (0.05, 0.1))
        self.assertEqual((config.long_min, config.short_min), (60, 15))
        self.assertEqual(config.window_days, 21)

    def test_weights_must_sum_to_one(self) -> None:
        config = DetectorConfig(weights=Weights(0.3, 0.3, 0.3))
        with self.assertRaisesRegex(ValueError, "sum to 1"):
            validate_config(config)
        with self.assertRaisesRegex(ValueError, "non-negative"):
            validate_config(DetectorConfig(weights=Weights(1.5, -0.5, 0.0)))

    def test_preset(self) -> None:
        config = validate_config(DetectorConfig(preset="spatial-temporal"))
        self.assertEqual(tuple(config.weights), (0.5, 0.5, 0.0))

        # A preset replaces explicit weights, even invalid ones
        config = validate_config(
            DetectorConfig(weights=Weights(0.3, 0.3, 0.3), preset="social-only")
        )
        self.assertEqual(tuple(config.weights), (0.0, 0.0, 1.0))
        with self.assertRaisesRegex(ValueError, "Unknown weight preset 'spatial'"):
            validate_config(DetectorConfig(preset="spatial"))

    def test_granularity_per_format(self) -> None:
        validate_config(DetectorConfig(input_format="checkin", granularity="checkin_period"))
        validate_config(DetectorConfig(input_format="checkin", granularity="access_point"))
        validate_config(DetectorConfig(granularity="building"))
        with self.assertRaisesRegex(ValueError, "does not apply to checkin"):
            validate_config(DetectorConfig(input_format="checkin", granularity="floor"))
        with self.assertRaisesRegex(ValueError, "does not apply to wifi"):
            validate_config(DetectorConfig(granularity="checkin_period"))
        with self.assertRaisesRegex(ValueError, "Unknown input_format"):
            validate_config(DetectorConfig(input_format="gps"))

    def test_invalid_settings(self) -> None:
        cases = [
            ({"period_minutes": 0}, "period_minutes must be positive"),
            ({"gap_max_minutes": -5}, "gap_max_minutes must be positive"),
            ({"work_min_minutes": -1}, "work_min_minutes"),
            ({"window_days": 0}, "window_days"),
            ({"phi_l": 0.2, "phi_u": 0.1}, "phi_l must not exceed phi_u"),
            ({"percentile_l": 96.0}, "Percentiles"),
            ({"percentile_u": 101.0}, "Percentiles"),
            ({"short_min": 90}, "short_min"),
            ({"minutes_mode": "hourly"}, "Unknown minutes_mode"),
            ({"overlap_frac": 1.5}, "overlap_frac"),
            ({"max_reject_ratio": -0.1}, "max_reject_ratio"),
            ({"n_parallel": 0}, "n_parallel"),
            ({"scheduler": "ray"}, "Unknown scheduler"),
        ]
        for updates, message in cases:
            with self.subTest(updates=updates):
                with self.assertRaisesRegex(ValueError, message):
                    validate_config(merge_config(DetectorConfig(), updates))

    def test_percentile_thresholds(self) -> None:
        # Either threshold may fall back to percentiles independently
        config = validate_config(DetectorConfig(phi_l=None, phi_u=0.1))
        self.assertIsNone(config.phi_l)
        validate_config(DetectorConfig(phi_l=0.5, phi_u=None))

    def test_merge_nested_weights(self) -> None:
        config = merge_config(
            DetectorConfig(), {"weights": {"alpha": 0.5, "beta": 0.25, "gamma": 0.25}}
        )
        self.assertEqual(tuple(validate_config(config).weights), (0.5, 0.25, 0.25))


if __name__ == "__main__":
    unittest.main()
