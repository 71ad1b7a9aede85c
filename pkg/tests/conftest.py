from hypothesis import HealthCheck, settings

# Statistical assertions (4 sigma) must not depend on a fresh random draw per run.
settings.register_profile(
    "repro", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repro")
