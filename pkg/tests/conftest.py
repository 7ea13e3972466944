"""Shared hypothesis settings: no deadline, tolerate slow numerical bodies."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "dekrylov",
    deadline=None,
    suppress_health_check=(HealthCheck.too_slow,),
)
settings.load_profile("dekrylov")
