import json
import os
from typing import Any, List

from .exceptions import DomainError, SpecializationNotFoundError, VerificationError
from .partitions import Partition
from .specializations import DecayBound, Specialization
from .types import GoldenDict, SpecializationDict

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
BUNDLED = {"plancherel": os.path.join(DATA_DIR, "plancherel.json")}


def load_specialization(path: str) -> Specialization:
    """
    Loads a specialization from a JSON file.

    The file holds ``{"coeffs": {"k": value, ...}, "decay": {"A": ..., "r": ...} | null}`` where each value is a
    number, a rational string such as ``"1/2"`` or an ``[re, im]`` pair. The names of bundled specializations
    (e.g. 'plancherel') are accepted in place of a path.

    Args:
        path: The file path or bundled name.

    Returns:
        The specialization.

    Raises:
        SpecializationNotFoundError: If the file does not exist.
        DomainError: If the file is not a valid specialization.
    """
    path = BUNDLED.get(path, path)
    try:
        with open(path, "r", encoding="utf-8") as spec_file:
            data: SpecializationDict = json.load(spec_file)
    except FileNotFoundError:
        raise SpecializationNotFoundError(path)
    except json.JSONDecodeError as e:
        raise DomainError(f"Specialization file {path} is not valid JSON: {e}")
    return specialization_from_dict(data)


def specialization_from_dict(data: Any) -> Specialization:
    if not isinstance(data, dict) or not isinstance(data.get("coeffs"), dict):
        raise DomainError("A specialization needs a 'coeffs' mapping.")
    try:
        coeffs = {int(k): v for k, v in data["coeffs"].items()}
    except ValueError:
        raise DomainError(f"Specialization indices must be integers, got {list(data['coeffs'])}.")
    decay = data.get("decay")
    bound = DecayBound(A=float(decay["A"]), r=float(decay["r"])) if decay else None
    return Specialization.from_mapping(coeffs, bound)


def specialization_to_dict(v: Specialization) -> SpecializationDict:
    coeffs = {str(k): list(value) if isinstance(value, tuple) else _plain(value) for k, value in v}
    decay = {"A": v.decay.A, "r": v.decay.r} if v.decay else None
    return {"coeffs": coeffs, "decay": decay}  # type: ignore[typeddict-item]


def _plain(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (int, float)):
        return value
    return str(value)


def load_partition(text: str) -> Partition:
    """
    Parses a partition written as space or comma separated parts; an empty string is the empty partition.

    Raises:
        DomainError: If the parts are not positive and weakly decreasing.
    """
    pieces = [piece for piece in text.replace(",", " ").split() if piece]
    try:
        parts: List[int] = [int(piece) for piece in pieces]
    except ValueError:
        raise DomainError(f"Cannot parse partition '{text}'.")
    return Partition(tuple(parts))


def load_golden(path: str = os.path.join(DATA_DIR, "golden.json")) -> GoldenDict:
    """
    Loads golden reference values for the property suite.

    Raises:
        DomainError: If the file does not exist.
        VerificationError: If the file is not valid JSON.
    """
    try:
        with open(path, "r", encoding="utf-8") as golden_file:
            return json.load(golden_file)
    except FileNotFoundError:
        raise DomainError(f"Golden file '{path}' does not exist.")
    except json.JSONDecodeError as e:
        raise VerificationError(f"Golden file '{path}' is corrupted: {e}")
