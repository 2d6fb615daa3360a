# SPDX-License-Identifier: Apache-2.0
"""IRS cascaded channel estimation workbench."""

from ._core import (
    MbaModel,
    config_from_text,
    dft_matrix,
    draw_cascaded_channels,
    flop_estimate,
    gain_report,
    hadamard_matrix,
    ls_estimate,
    ls_mse_objective,
    make_pattern,
    nmse,
    parse_results,
    format_results,
    run_cli,
)

__all__ = [
    "MbaModel",
    "config_from_text",
    "dft_matrix",
    "draw_cascaded_channels",
    "flop_estimate",
    "gain_report",
    "hadamard_matrix",
    "ls_estimate",
    "ls_mse_objective",
    "make_pattern",
    "nmse",
    "parse_results",
    "format_results",
    "run_cli",
]
