"""Run reports: JSON (versioned schema) and fixed-column CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .builder import BuildResult, BuildStep
from .container import ContainerStats
from .header import HeaderLayout

SCHEMA_VERSION = 1

STEP_COLUMNS = ("step", "symbol_expansion_escaped", "freq", "gain_bits",
                "header_cost_bits", "bpc_message", "bpc_total")
SUMMARY_COLUMNS = ("file", "input_bytes", "base_alphabet_size", "agcount",
                   "header_bits", "message_bits", "total_bits", "container_bits",
                   "bpc_message", "bpc_total", "wall_clock_seconds")


def escape(data: bytes) -> str:
    """Printable, reversible rendering of a byte string (``\\n``, ``\\x1a`` ...)."""
    return data.decode("latin-1").encode("unicode_escape").decode("ascii")


def _r4(x: Optional[float]):
    return None if x is None else round(float(x), 4)


def _bpc(bits: float, nbytes: int) -> float:
    return bits / nbytes if nbytes else 0.0


def _stats(header: HeaderLayout, message_bits: float, nbytes: int) -> dict:
    total = header.total_bits + message_bits
    return {
        "agcount": header.agcount,
        "mxbits": header.mxbits,
        "header_bits": header.total_bits,
        "header_bits_excluding_agcount": header.bits_excluding_agcount,
        "message_bits": _r4(message_bits),
        "total_bits": _r4(total),
        "bpc_message": _r4(_bpc(message_bits, nbytes)),
        "bpc_total": _r4(_bpc(total, nbytes)),
    }


def step_dict(step: BuildStep) -> dict:
    return {
        "step": step.step_index,
        "symbol_expansion_escaped": escape(step.expansion),
        "symbol_id": step.symbol_id,
        "left": step.chosen.left,
        "right": step.chosen.right,
        "freq": step.chosen.count,
        "r": step.chosen.r,
        "gain_bits": _r4(step.gain_bits),
        "header_cost_bits": step.header_cost_bits,
        "message_bits": _r4(step.message_bits_after),
        "alphabet_bits": step.alphabet_bits_after,
        "bpc_message": _r4(step.bpc_message),
        "bpc_total": _r4(step.bpc_total),
        "oracle_deviation": step.oracle_deviation,
    }


@dataclass
class RunReport:
    input_path: str
    input_bytes: int
    base_alphabet_size: int
    initial: dict
    final: dict
    steps: list = field(default_factory=list)
    stop_reason: str = ""
    max_oracle_deviation: Optional[float] = None
    wall_clock_seconds: float = 0.0

    @classmethod
    def from_build(cls, path: str, result: BuildResult,
                   container: Optional[ContainerStats] = None,
                   seconds: float = 0.0) -> "RunReport":
        nbytes = result.stream.source_length_bytes
        base = result.alphabet.base_size
        initial_layout = HeaderLayout(result.freq_bits, result.alphabet.nonstandard_count, 0)
        initial = _stats(initial_layout, result.initial_message_bits, nbytes)
        initial["tokens"] = result.initial_tokens
        initial["distinct_symbols"] = result.initial_distinct
        final_layout = HeaderLayout.for_alphabet(result.alphabet, result.freq_bits)
        final = _stats(final_layout, result.message_bits, nbytes)
        final["tokens"] = len(result.stream)
        if container is not None:
            final.update(
                payload_bits=container.payload_bits,
                framing_bits=container.framing_bits,
                container_bits=container.container_bits,
                container_bpc=_r4(_bpc(container.container_bits, nbytes)),
            )
        return cls(
            input_path=str(path),
            input_bytes=nbytes,
            base_alphabet_size=base,
            initial=initial,
            final=final,
            steps=[step_dict(s) for s in result.steps],
            stop_reason=result.stop_reason,
            max_oracle_deviation=result.max_oracle_deviation,
            wall_clock_seconds=_r4(seconds),
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "input_path": self.input_path,
            "input_bytes": self.input_bytes,
            "base_alphabet_size": self.base_alphabet_size,
            "initial": self.initial,
            "steps": self.steps,
            "final": self.final,
            "stop_reason": self.stop_reason,
            "max_oracle_deviation": self.max_oracle_deviation,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def summary_row(self) -> dict:
        return {
            "file": self.input_path,
            "input_bytes": self.input_bytes,
            "base_alphabet_size": self.base_alphabet_size,
            "agcount": self.final["agcount"],
            "header_bits": self.final["header_bits"],
            "message_bits": self.final["message_bits"],
            "total_bits": self.final["total_bits"],
            "container_bits": self.final.get("container_bits"),
            "bpc_message": self.final["bpc_message"],
            "bpc_total": self.final["bpc_total"],
            "wall_clock_seconds": self.wall_clock_seconds,
        }


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{value:.4f}"
    return str(value)


def to_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def steps_csv(report: RunReport) -> str:
    return to_csv(report.steps, STEP_COLUMNS)


def bench_json(reports: list[RunReport]) -> dict:
    return {"schema_version": SCHEMA_VERSION, "files": [r.to_dict() for r in reports]}
