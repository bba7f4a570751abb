"""webrely: reliability evaluation and improvement toolkit for web applications.

Measures defect density under simulated ideal conditions and against a live
HTTP target, fits Weibull reliability models by maximum likelihood, computes
PSP quality metrics, and compares evaluation rounds before and after process
improvement.
"""

__version__ = "0.1.0"
