"""Grid-placement task family: generators, counters, verifiers."""
