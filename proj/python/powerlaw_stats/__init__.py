"""Sufficiency, conditioning, and information bounds for power-law families."""

try:
    # installed layout: the extension lives inside the package
    from . import _powerlaw as _impl
except ImportError:  # build-tree layout: extension on PYTHONPATH
    import _powerlaw as _impl

Family = _impl.Family
PowerlawError = _impl.PowerlawError
basu_location_bound = _impl.basu_location_bound
binomial_cs_roots = _impl.binomial_cs_roots
bound_report = _impl.bound_report
jones_estimate_from_suffstats = _impl.jones_estimate_from_suffstats
rao_blackwell = _impl.rao_blackwell
robust_demo = _impl.robust_demo
student_closed_forms = _impl.student_closed_forms
sufficiency_verdict = _impl.sufficiency_verdict

__all__ = [
    "Family",
    "PowerlawError",
    "basu_location_bound",
    "binomial_cs_roots",
    "bound_report",
    "jones_estimate_from_suffstats",
    "rao_blackwell",
    "robust_demo",
    "student_closed_forms",
    "sufficiency_verdict",
]
