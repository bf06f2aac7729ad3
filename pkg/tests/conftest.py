import pytest

from swipt_plsec import ChannelStats, SystemParams, resolve_scenario


def db(x: float) -> float:
    return 10.0 ** (x / 10.0)


@pytest.fixture(scope="session")
def s1() -> ChannelStats:
    return resolve_scenario("s1")


@pytest.fixture(scope="session")
def s2() -> ChannelStats:
    return resolve_scenario("s2")


@pytest.fixture(scope="session")
def dense_stats() -> ChannelStats:
    """Strong source/relay-to-eavesdropper links, weak wiretap and jammer rates.

    This is the regime where the static-splitting intercept series is
    numerically summable (large Bessel argument, small exponential tilt).
    """
    return ChannelStats(lambda_sr=2.0, lambda_rd=0.1768, lambda_re=2.0,
                        lambda_je=0.5, lambda_se=0.5)


def make_params(psi_db: float = 2.0, rho: float = 0.5, phi_db: float = 1.0,
                num_sources: int = 2, num_jammers: int = 1,
                c_th: float = 0.5, eta: float = 0.8) -> SystemParams:
    return SystemParams(eta=eta, rho=rho, psi=db(psi_db), phi=db(phi_db),
                        num_sources=num_sources, num_jammers=num_jammers, c_th=c_th)
