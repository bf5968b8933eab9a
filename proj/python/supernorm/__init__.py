"""p-supermodular norms: approximation, certification and online algorithms."""

from ._core import (  # noqa: F401
    Norm,
    OrliczFunction,
    approximate_orlicz_norm,
    brute_opt_loadbalance,
    check_four_point,
    check_gradient_monotone,
    check_gradient_stability,
    check_hessian,
    estimate_approx_ratio,
    generate_instance,
    greedy_loadbalance,
    growth_check,
    offline_opt_cover,
    offline_opt_pack,
    olo_ftpl,
    orlicz_eval,
    orlicz_grad,
    piecewise_approx,
    probe_report,
    psupermodular_approx_symmetric,
    smooth_hinges,
    solve_cover,
    solve_pack,
    topk_orlicz,
)

__all__ = [
    "Norm",
    "OrliczFunction",
    "approximate_orlicz_norm",
    "brute_opt_loadbalance",
    "check_four_point",
    "check_gradient_monotone",
    "check_gradient_stability",
    "check_hessian",
    "estimate_approx_ratio",
    "generate_instance",
    "greedy_loadbalance",
    "growth_check",
    "offline_opt_cover",
    "offline_opt_pack",
    "olo_ftpl",
    "orlicz_eval",
    "orlicz_grad",
    "piecewise_approx",
    "probe_report",
    "psupermodular_approx_symmetric",
    "smooth_hinges",
    "solve_cover",
    "solve_pack",
    "topk_orlicz",
]
