# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
CSV and text rendering of the analysis reports.

:py:func:`csv_rows` and :py:func:`render_text` dispatch on the report type;
:py:func:`render` selects one of them for the ``--format`` option.
"""

import csv
import functools
import io
from typing import Any, Literal, Optional

from .continuum import ContinuumReport
from .montecarlo import TrialReport
from .oracle import OracleReport, Signs
from .orthogonality import OrthogonalityReport
from .scenario import ScenarioReport

Format = Literal["csv", "text"]
FORMATS: tuple[Format, ...] = ("csv", "text")

Row = dict[str, Any]


def _flag(passed: bool) -> str:
    return "true" if passed else "false"


def _signs(s: Signs) -> str:
    return "".join("+" if bit > 0 else "-" for bit in s)


@functools.singledispatch
def csv_rows(report: object) -> list[Row]:
    raise TypeError(f"No CSV layout for {type(report).__name__}.")


@csv_rows.register
def _trial_rows(report: TrialReport) -> list[Row]:
    return [
        {
            "k": report.k,
            "L": report.L,
            "trials": report.trials,
            "false_accepts": report.false_accepts,
            "rate": report.rate,
            "expected": report.expected,
            "sigma": report.sigma,
            "pass": _flag(report.passed),
        }
    ]


@csv_rows.register
def _oracle_rows(report: OracleReport) -> list[Row]:
    return [
        {
            "L": report.L,
            "k": report.k,
            "a": _signs(a),
            "b": _signs(b),
            "rtw_probability": str(probability),
            "gf2_probability": str(report.gf2.probabilities[(a, b)]),
            "expected": str(report.rtw.expected),
            "pass": _flag(
                probability == report.rtw.expected
                and report.gf2.probabilities[(a, b)] == probability
            ),
        }
        for (a, b), probability in report.rtw.probabilities.items()
    ]


@csv_rows.register
def _orthogonality_rows(report: OrthogonalityReport) -> list[Row]:
    return [
        {
            "name": row.name,
            "estimate": row.estimate,
            "target": row.target,
            "tolerance": row.tolerance,
            "spread_band": row.spread_band,
            "samples": row.samples,
            "pass": _flag(row.passed),
        }
        for row in report.rows
    ]


@csv_rows.register
def _scenario_rows(report: ScenarioReport) -> list[Row]:
    return [
        {
            "L": report.L,
            "channel_rate": report.channel_rate,
            "epsilon": report.epsilon,
            "k": report.k,
            "protocol_time": report.protocol_time,
            "headline_k": report.headline_k,
            "headline_protocol_time": report.headline_protocol_time,
            "headline_error": report.headline_error,
            "naive_time": report.naive_time,
            "naive_years": report.naive_years,
        }
    ]


def _measured(
    name: str, value: float, expected: Any = "", passed: Optional[bool] = None
) -> Row:
    row: Row = dict.fromkeys(["name", "observed", "expected", "sigma", "trials", "pass"], "")
    row.update(name=name, observed=value, expected=expected)
    if passed is not None:
        row["pass"] = _flag(passed)
    return row


@csv_rows.register
def _continuum_rows(report: ContinuumReport) -> list[Row]:
    rows: list[Row] = [
        {
            "name": row.name,
            "observed": row.observed,
            "expected": row.expected,
            "sigma": row.sigma,
            "trials": row.trials,
            "pass": _flag(row.passed),
        }
        for row in report.rows
    ]
    rows += [
        _measured("detection_unfiltered", report.detection_unfiltered),
        _measured("detection_filtered", report.detection_filtered),
        _measured("detection_single_bit", report.detection_single_bit),
        _measured("correlation_single", report.correlation_single),
        _measured("correlation_product", report.correlation_product),
        _measured("bandwidth_ratio", report.bandwidth_ratio, 0.25, report.bandwidth_passed),
    ]
    return rows


@functools.singledispatch
def render_text(report: object) -> str:
    raise TypeError(f"No text layout for {type(report).__name__}.")


@render_text.register
def _trial_text(report: TrialReport) -> str:
    kind = "unequal" if report.unequal else "equal"
    return "\n".join(
        [
            f"k={report.k} L={report.L}, {report.trials} trials with {kind} pairs",
            f"equal verdicts: {report.false_accepts} (rate {report.rate:.6g})",
            f"expected:       {report.expected:.6g} +/- {3 * report.sigma:.3g} (3 sigma)",
            f"misclassified:  {report.misclassified}",
            f"result:         {'PASS' if report.passed else 'FAIL'}",
        ]
    )


@render_text.register
def _oracle_text(report: OracleReport) -> str:
    lines = [
        f"L={report.L} k={report.k}: {report.rtw.tables} coin tables, "
        f"{report.gf2.tables} GF(2) tables, expected {report.rtw.expected}"
    ]
    for (a, b), probability in report.rtw.probabilities.items():
        lines.append(
            f"  {_signs(a)} vs {_signs(b)}: rtw {probability}, "
            f"gf2 {report.gf2.probabilities[(a, b)]}"
        )
    lines += [
        f"false rejections: {report.rtw.false_rejections} rtw, "
        f"{report.gf2.false_rejections} gf2",
        f"baseline equivalent: {'yes' if report.baseline_equivalent else 'no'}",
        f"result: {'PASS' if report.passed else 'FAIL'}",
    ]
    return "\n".join(lines)


@render_text.register
def _orthogonality_text(report: OrthogonalityReport) -> str:
    width = max(len(row.name) for row in report.rows)
    lines = [f"{len(report.rows)} time averages over n={report.n}"]
    for row in report.rows:
        lines.append(
            f"  {row.name:<{width}}  {row.estimate:+.5f}  target {row.target:g}"
            f"  +/- {row.tolerance:.5f} (band {row.spread_band:.5f})"
            f"  {'ok' if row.passed else 'FAIL'}"
        )
    lines += [
        f"RTW sign uniformity: chi-square p = {report.uniformity_pvalue:.4g}",
        f"result: {'PASS' if report.passed else 'FAIL'}",
    ]
    return "\n".join(lines)


@render_text.register
def _scenario_text(report: ScenarioReport) -> str:
    return "\n".join(
        [
            f"L = {report.L:.4g} bits over {report.channel_rate:g} bit/s, "
            f"epsilon = {report.epsilon:g}",
            f"protocol: {report.protocol_time:.3g} s (k={report.k}, 2^-k < epsilon)",
            f"headline: {report.headline_protocol_time:.3g} s (k={report.headline_k}, "
            f"0.5^{report.headline_k} = {report.headline_error:.4g})",
            f"naive:    {report.naive_time:.4g} s ({report.naive_years:.1f} years)",
        ]
    )


@render_text.register
def _continuum_text(report: ContinuumReport) -> str:
    lines = [
        f"L={report.L} ({report.differing} differing), {report.samples} samples, "
        f"cutoff {report.cutoff:g}",
        f"equal strings consistent: {'yes' if report.equal_consistent else 'no'}",
        f"unequal strings detected: {'yes' if report.unequal_detected else 'no'}",
    ]
    for row in report.rows:
        lines.append(
            f"  {row.name:<18} {row.observed:.6g} (expected {row.expected:.6g}"
            f" +/- {3 * row.sigma:.3g})  {'ok' if row.passed else 'FAIL'}"
        )
    lines += [
        f"detection time: {report.detection_unfiltered:.3g} samples unfiltered, "
        f"{report.detection_filtered:.3g} filtered, "
        f"{report.detection_single_bit:.3g} for a single filtered noise bit",
        f"correlation time: {report.correlation_single:.4g} single, "
        f"{report.correlation_product:.4g} product of 4 "
        f"(ratio {report.bandwidth_ratio:.3f}, expected 0.25)",
        f"result: {'PASS' if report.passed else 'FAIL'}",
    ]
    return "\n".join(lines)


def to_csv(report: object) -> str:
    rows = csv_rows(report)
    transformed = io.StringIO()
    writer = csv.DictWriter(transformed, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return transformed.getvalue()


def render(report: object, fmt: Format) -> str:
    if fmt == "csv":
        return to_csv(report)
    return render_text(report) + "\n"
