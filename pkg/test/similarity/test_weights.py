import unittest

from groupsense.similarity import PRESETS, Weights, resolve_weights, validate_weights


class WeightsTest(unittest.TestCase):
    def test_validate_weights(self):
        self.assertEqual(validate_weights(Weights()), Weights())
        validate_weights(Weights(1.0, 0.0, 0.0))
        with self.assertRaisesRegex(ValueError, "sum to 1, got alpha\\+beta\\+gamma=0.9"):
            validate_weights(Weights(0.3, 0.3, 0.3))
        with self.assertRaisesRegex(ValueError, "non-negative"):
            validate_weights(Weights(1.5, -0.5, 0.0))

    def test_presets(self):
        self.assertEqual(resolve_weights(Weights(), "spatial-temporal"), Weights(0.5, 0.5, 0.0))
        self.assertEqual(resolve_weights(Weights(0.2, 0.3, 0.5)), Weights(0.2, 0.3, 0.5))
        for weights in PRESETS.values():
            validate_weights(weights)
        with self.assertRaisesRegex(ValueError, "Unknown weight preset 'heavy'"):
            resolve_weights(Weights(), "heavy")


if __name__ == "__main__":
    unittest.main()
