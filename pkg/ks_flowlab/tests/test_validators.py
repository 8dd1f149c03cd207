import unittest
import numpy as np
from ks_flowlab.metric_core import SourceDomain
from ks_flowlab.validators import ValidatorFactory


class ValidatorsTestCase(unittest.TestCase):

    def test_value_in_validator(self):
        validator = ValidatorFactory.value_in_validator(['l1', 'l2'])
        self.assertTrue(validator('l1'))
        self.assertTrue(validator('l2'))
        self.assertFalse(validator('linf'))

    def test_nonempty_validator(self):
        validator = ValidatorFactory.nonempty_validator()
        self.assertFalse(validator(''))
        self.assertFalse(validator(None))
        self.assertTrue(validator('out'))

    def test_float_validator(self):
        validator = ValidatorFactory.float_validator()
        self.assertTrue(validator(0.0))
        self.assertTrue(validator(1))
        self.assertFalse(validator('0.0'))
        self.assertFalse(validator(True))
        self.assertFalse(validator(float('nan')))
        self.assertFalse(validator(float('inf')))
        self.assertTrue(validator(-1.0))
        self.assertTrue(validator(np.float64(1.0)))

    def test_int_validator(self):
        validator = ValidatorFactory.integer_validator()
        zero_validator = ValidatorFactory.integer_validator(True, False)
        negative_validator = ValidatorFactory.integer_validator(False, False)
        self.assertTrue(validator(5))
        self.assertTrue(validator(np.int32(4)))
        self.assertFalse(validator(0.5))
        self.assertFalse(validator(23.4))
        self.assertFalse(validator('1'))
        self.assertFalse(validator(0))
        self.assertFalse(validator(-4))
        self.assertFalse(validator(True))
        self.assertTrue(zero_validator(0))
        self.assertTrue(negative_validator(-1))

    def test_string_validator(self):
        validator = ValidatorFactory.string_validator(r'^[a-z]+$')
        self.assertTrue(validator('tripod'))
        self.assertFalse(validator('Tripod'))
        self.assertFalse(validator(3))
        self.assertTrue(ValidatorFactory.string_validator()('anything'))

    def test_range_validator(self):
        validator = ValidatorFactory.range_validator(0.0, 1.0, low_open=True)
        self.assertFalse(validator(0.0))
        self.assertTrue(validator(0.5))
        self.assertTrue(validator(1.0))
        self.assertFalse(validator(1.5))
        self.assertFalse(validator('0.5'))
        unbounded = ValidatorFactory.range_validator(1.0, None, low_open=True)
        self.assertTrue(unbounded(1e6))
        self.assertFalse(unbounded(1.0))

    def test_list_validator(self):
        validator = ValidatorFactory.list_validator(
            ValidatorFactory.integer_validator())
        self.assertTrue(validator((2, 4, 6)))
        self.assertFalse(validator(()))
        self.assertFalse(validator((2, 0)))
        self.assertFalse(validator('246'))
        self.assertFalse(validator(5))

    def test_tag_validator(self):
        validator = ValidatorFactory.tag_validator(SourceDomain.from_tag)
        self.assertTrue(validator('disk(1)'))
        self.assertTrue(validator('annulus(0.5, 1)'))
        self.assertFalse(validator('disk(-1)'))
        self.assertFalse(validator('blob'))
        self.assertFalse(validator(3))
