from hypothesis import settings

# deterministic, load-tolerant property testing: quadrature-backed examples
# can exceed the default 200 ms deadline on a busy machine
settings.register_profile("pompeiu", deadline=None, derandomize=True)
settings.load_profile("pompeiu")
