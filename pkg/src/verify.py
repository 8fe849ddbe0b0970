"""
Oracle-vs-chain verification.

Each instance is realized as a graph and solved twice: by the linear-time
chain decompositions and by the exact solver. Every disagreement becomes a
mismatch record (a plain dict, ready for JSON).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import chain
from .config import Caps
from .errors import VerificationError
from .solver import c_prime, spectrum_exact

logger = logging.getLogger(__name__)


@dataclass
class VerifyOutcome:
    spec: str
    chain_values: dict = field(default_factory=dict)
    oracle_values: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            'spec': self.spec,
            'ok': self.ok,
            'chain': self.chain_values,
            'oracle': self.oracle_values,
            'mismatches': self.mismatches,
        }


def _compare(outcome: VerifyOutcome, check: str, chain_value, oracle_value) -> None:
    if chain_value != oracle_value:
        outcome.mismatches.append({'check': check, 'chain': chain_value, 'oracle': oracle_value})


def verify_chain(spec: chain.ChainSpec, caps: Caps = Caps(), jobs: int = 1,
                 check_compatible: bool = True) -> VerifyOutcome:
    """Cross-check one chain.

    Raises:
        CapExceededError: the realized graph is too large for the oracle.
    """
    text = chain.format_chain(spec)
    outcome = VerifyOutcome(spec=text)
    graph, _ = chain.realize(spec)

    af = chain.chain_af(spec)
    max_af = chain.chain_max_af(spec)
    spectrum = list(chain.spectrum_chain(spec).values)
    outcome.chain_values = {'af': af, 'max_af': max_af, 'spectrum': spectrum}

    exact = spectrum_exact(graph, caps, jobs, per_matching=True)
    values = [v for _, v in exact.per_matching]
    outcome.oracle_values = {'af': min(values), 'max_af': max(values), 'spectrum': list(exact.values)}

    for key in ('af', 'max_af', 'spectrum'):
        _compare(outcome, key, outcome.chain_values[key], outcome.oracle_values[key])

    if check_compatible:
        for m, value in exact.per_matching:
            size = c_prime(graph, m, caps).size
            if size != value:
                outcome.mismatches.append({'check': 'c_prime', 'matching': list(m.edge_ids),
                                           'af': value, 'c_prime': size})

    _compare(outcome, 'kinks', list(chain.kink_flags(spec).flags),
             list(chain.kink_flags_by_matching(spec).flags))
    outcome.mismatches.extend(chain.check_ominus(spec))

    try:
        witness = chain.min_witness(spec, caps)
    except VerificationError as e:
        outcome.mismatches.append({'check': 'witness', 'error': str(e)})
    else:
        _compare(outcome, 'witness_size', len(witness), min(values))

    if outcome.ok:
        logger.debug("verified %s: af=%d Af=%d", text, af, max_af)
    else:
        logger.info("mismatch on %s: %s", text, outcome.mismatches)
    return outcome


def batch_specs(family: str, n: int, count: int = 1, seed: Optional[int] = None,
                modes: Optional[str] = None) -> list:
    """Instances for a batch run.

    ``random`` uses seeds seed, seed+1, ... and face counts cycling through
    1..n; other families are deterministic, so count is ignored.
    """
    if family != 'random':
        return [chain.generate(family, n, modes)]
    if seed is None:
        # generate() raises the proper error
        return [chain.generate(family, n, modes, seed)]
    return [chain.generate(family, 1 + k % n, modes, seed + k) for k in range(count)]


def verify_batch(specs: Iterable[chain.ChainSpec], caps: Caps = Caps(), jobs: int = 1,
                 check_compatible: bool = True) -> list:
    outcomes = []
    for idx, spec in enumerate(specs, start=1):
        outcomes.append(verify_chain(spec, caps, jobs, check_compatible))
        logger.debug("verify progress: %d instances", idx)
    failed = sum(1 for o in outcomes if not o.ok)
    if failed:
        logger.warning("%d of %d instances disagree", failed, len(outcomes))
    return outcomes
