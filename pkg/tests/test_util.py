import json

import pytest

from jack_measures import util
from jack_measures.exceptions import DomainError, SpecializationNotFoundError, VerificationError
from jack_measures.partitions import EMPTY, Partition
from jack_measures.specializations import DecayBound, Specialization


@pytest.fixture
def spec_file(tmp_path):
    def _spec_file(content):
        path = tmp_path / "spec.json"
        path.write_text(content if isinstance(content, str) else json.dumps(content), encoding="utf-8")
        return str(path)

    return _spec_file


def test_bundled_plancherel():
    assert util.load_specialization("plancherel") == Specialization.plancherel()


def test_load_specialization(spec_file):
    path = spec_file({"coeffs": {"1": 1, "2": "1/2", "3": [0, "1/4"]}, "decay": {"A": 1, "r": 0.5}})
    v = util.load_specialization(path)
    assert v.support == (1, 2, 3)
    assert v.decay == DecayBound(A=1.0, r=0.5)


def test_missing_specialization(tmp_path):
    path = str(tmp_path / "absent.json")
    with pytest.raises(SpecializationNotFoundError) as excinfo:
        util.load_specialization(path)
    assert path in str(excinfo.value)


@pytest.mark.parametrize(
    "content,message",
    [
        ("{not json", "not valid JSON"),
        ({"decay": None}, "'coeffs' mapping"),
        ({"coeffs": {"one": 1}}, "must be integers"),
        ({"coeffs": {"0": 1}}, "must be positive"),
    ],
)
def test_invalid_specialization(spec_file, content, message):
    with pytest.raises(DomainError) as excinfo:
        util.load_specialization(spec_file(content))
    assert message in str(excinfo.value)


def test_specialization_to_dict(specialization):
    v = specialization({2: "1/2", 3: [0, 1]})
    data = util.specialization_to_dict(v)
    assert data == {"coeffs": {"1": 1, "2": "1/2", "3": [0, 1]}, "decay": None}
    assert util.specialization_from_dict(data).support == v.support


@pytest.mark.parametrize(
    "text,expected",
    [("3 2 1", Partition((3, 2, 1))), ("4,1,1", Partition((4, 1, 1))), ("", EMPTY), (" 2 ", Partition((2,)))],
)
def test_load_partition(text, expected):
    assert util.load_partition(text) == expected


@pytest.mark.parametrize("text", ["2 x", "1 2", "0"])
def test_invalid_partition(text):
    with pytest.raises(DomainError):
        util.load_partition(text)


def test_load_golden():
    golden = util.load_golden()
    assert golden["catalan"] == [1, 2, 5, 14, 42]
    assert golden["central_binomials"] == [2, 6, 20, 70]
    assert golden["covariance_22"] == 4.0


def test_golden_errors(tmp_path):
    with pytest.raises(DomainError) as excinfo:
        util.load_golden(str(tmp_path / "absent.json"))
    assert "does not exist" in str(excinfo.value)
    corrupted = tmp_path / "golden.json"
    corrupted.write_text("{", encoding="utf-8")
    with pytest.raises(VerificationError) as excinfo:
        util.load_golden(str(corrupted))
    assert "corrupted" in str(excinfo.value)
