"""Shared fixtures: the builtin registry and scripted chat clients."""

from fractions import Fraction

import pytest

from logicgen.builtin import default_registry
from logicgen.calibration import AttemptTimeout
from logicgen.protocol import render_training_prompt
from logicgen.registry import derive_seed


@pytest.fixture(scope="session")
def registry():
    return default_registry()


class ScriptedClient:
    """Offline stand-in for the chat client with exact per-level pass rates.

    Attempt j at any instance of ladder level index L succeeds iff
    j < rates[L] * k. estimate_pass walks attempts with j ascending and one
    call per (instance, attempt), so a level's avg@k equals rates[L] exactly
    and pass@k is 1 iff rates[L] > 0. Counters wrap at k, so running several
    scans with one client gives each scan a fresh attempt sequence.
    """

    model_name = "scripted"

    def __init__(self, registry, ladder, rates, *, n_instances, k, master_seed=0):
        assert len(rates) == len(ladder.levels)
        self.k = k
        self.rates = [Fraction(r) for r in rates]
        self.calls = 0
        self._answers = {}
        self._seen = {}
        desc = registry.get(ladder.task)
        for idx, level in enumerate(ladder.levels):
            params = ladder.params_at(level)
            for i in range(n_instances):
                inst = registry.generate_instance(
                    ladder.task, params, derive_seed(master_seed, ladder.task, i)
                )
                prompt = render_training_prompt(inst.prompt)
                # prompt collisions across levels would make the script ambiguous
                assert self._answers.get(prompt, (idx, None))[0] == idx
                self._answers[prompt] = (idx, desc.serialize_answer(inst.reference_answer))

    def complete(self, prompt: str) -> str:
        self.calls += 1
        idx, answer = self._answers[prompt]
        j = self._seen.get(prompt, 0)
        self._seen[prompt] = j + 1
        j %= self.k
        if Fraction(j, self.k) < self.rates[idx]:
            return f"<think>scripted</think><answer>{answer}</answer>"
        return "<think>scripted</think><answer>0 0 0</answer>"


class TimeoutEveryNthClient:
    """Wraps a scripted client; every nth call times out instead."""

    model_name = "flaky"

    def __init__(self, inner, every: int):
        self._inner = inner
        self._every = every
        self._n = 0

    def complete(self, prompt: str) -> str:
        self._n += 1
        if self._n % self._every == 0:
            raise AttemptTimeout("scripted timeout")
        return self._inner.complete(prompt)


@pytest.fixture
def scripted_client_cls():
    return ScriptedClient


@pytest.fixture
def timeout_client_cls():
    return TimeoutEveryNthClient
