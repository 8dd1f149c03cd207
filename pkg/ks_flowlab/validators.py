import re
import numbers

import numpy as np


class ValidatorFactory(object):
    """Validator factory"""

    @classmethod
    def nonempty_validator(cls):
        """Returns a validator checking if x is not empty"""
        def f(x):
            return bool(x)
        return f

    @classmethod
    def value_in_validator(cls, allowed_values):
        """Returns a validator checking if x matches one of allowed_values"""
        def f(x):
            return x in allowed_values
        return f

    @classmethod
    def float_validator(cls):
        """Returns a validator checking if x is a finite real number"""
        def f(x):
            if isinstance(x, bool) or not isinstance(x, numbers.Real):
                return False
            return bool(np.isfinite(x))
        return f

    @classmethod
    def string_validator(cls, regex=None):
        """Returns a validator checking if x is a string
        optionally also matching a regular expression"""
        def f(x):
            valid = isinstance(x, str)
            if valid and regex is not None:
                if not re.match(regex, x):
                    valid = False
            return valid
        return f

    @classmethod
    def integer_validator(cls, positive=True, nonzero=True):
        """Returns a validator checking if x is a (positive, nonzero) integer"""
        def f(x):
            valid = isinstance(x, (int, np.integer)) and not isinstance(x, bool)
            if valid and positive and x < 0:
                valid = False
            if valid and nonzero and x == 0:
                valid = False
            return valid
        return f

    @classmethod
    def range_validator(cls, low=None, high=None, low_open=False,
                        high_open=False):
        """Returns a validator checking if x is a real number inside
        the interval between low and high (either may be None)"""
        number = cls.float_validator()

        def f(x):
            if not number(x):
                return False
            if low is not None:
                if x < low or (low_open and x == low):
                    return False
            if high is not None:
                if x > high or (high_open and x == high):
                    return False
            return True
        return f

    @classmethod
    def list_validator(cls, item_validator, min_length=1):
        """Returns a validator checking if x is a sequence whose items
        all pass item_validator"""
        def f(x):
            if isinstance(x, str):
                return False
            try:
                items = list(x)
            except TypeError:
                return False
            if len(items) < min_length:
                return False
            return all(item_validator(item) for item in items)
        return f

    @classmethod
    def tag_validator(cls, builder):
        """Returns a validator checking if the tag x is accepted by the
        constructor registry behind builder"""
        def f(x):
            if not isinstance(x, str):
                return False
            try:
                builder(x)
                return True
            except ValueError:
                return False
        return f
