import numpy as np
import pytest

from stbc_rts import (add_noise, bits_to_symbols, effective_channel, encode,
                      ill_code, make_pam, realify, sample_channel,
                      snr_to_sigma2)


def transmitted_entry_energy(code, sset):
    """Mean energy of one code-matrix entry (n data symbols per entry)."""
    return code.n * 2.0 * sset.mean_energy


def random_instance(rng, n, m_pam=2, snr_db=10.0, nr=None, code=None):
    """Draw one full transmit/receive instance; returns (RealSystem, x_r)."""
    nr = n if nr is None else nr
    sset = make_pam(m_pam, 1 if m_pam == 2 else 2)
    code = ill_code(n) if code is None else code
    sigma2 = snr_to_sigma2(snr_db, n, transmitted_entry_energy(code, sset))
    bits = rng.integers(0, 2, size=2 * code.k * sset.bits_per_symbol)
    x_r = bits_to_symbols(bits, sset)
    data = x_r[:code.k] + 1j * x_r[code.k:]
    H_c = sample_channel(rng, nr, n).H_c
    Y_c = add_noise(rng, H_c @ encode(code, data), sigma2)
    sys = realify(effective_channel(code, H_c), Y_c.ravel(order="F"), sigma2)
    return sys, x_r, sset


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# Pass/fail lines recorded by the acceptance tests; echoed at the end of the
# terminal report so they are visible regardless of capture settings.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
