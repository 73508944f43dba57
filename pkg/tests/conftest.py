from fractions import Fraction

import pytest

from jack_measures import ScalarField, Specialization, params_from_ebar_hbar


@pytest.fixture
def params():
    # exact whenever ebar² + 4·hbar is a rational square
    def _params(override={}):
        defaults = {"ebar": Fraction(0), "hbar": Fraction(1)}
        if override:
            defaults.update(override)
        return params_from_ebar_hbar(defaults["ebar"], defaults["hbar"])

    return _params


@pytest.fixture
def specialization():
    # setting a key to None in override will strip it from the coefficients
    def _specialization(override={}):
        defaults = {1: 1}
        if override:
            defaults.update(override)
        defaults = {k: v for k, v in defaults.items() if v is not None}
        return Specialization.from_mapping(defaults)

    return _specialization


@pytest.fixture
def plancherel():
    return Specialization.plancherel()


@pytest.fixture
def exact():
    return ScalarField(exact=True)


@pytest.fixture
def numeric():
    return ScalarField()
