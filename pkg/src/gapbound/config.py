"""Centralized tolerance configuration.

Every numeric tolerance used by the toolkit lives here so reports can echo
the exact record they were produced under.
"""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    # eigensolver: stop when off-diagonal Frobenius norm <= factor * ||A||_F
    eig_offdiag_factor: float = 1e-13
    eig_max_sweeps: int = 100
    # spectrum certificates
    spectrum_residual: float = 1e-10     # * max(1, |lambda_max|)
    orthonormality: float = 1e-10
    recurrence: float = 1e-9             # componentwise eigen-recurrence
    rayleigh: float = 1e-9               # Rayleigh quotient vs lambda_1
    # moduli
    tie_factor: float = 1e-9             # * max(1, eta(D)) for achiever ties
    denominator_zero: float = 1e-12      # skip threshold in the ratio constant
    concavity_slack: float = 1e-10       # log-concavity predicate slack
    # bound verification
    verify_factor: float = 1e-9          # * max(1, gap) for slack checks
    # heat equation
    mass_conservation: float = 1e-9
    semigroup: float = 1e-9
    reconstruction: float = 1e-10        # phi(0) must reproduce phi0
    decay_margin: float = 1e-6           # fitted rate >= mu - margin
    ratio_identity: float = 1e-8         # stationary ratio-evolution identity
    euler_vs_spectral: float = 1e-6

    def with_overrides(self, **kwargs) -> "ToleranceConfig":
        unknown = set(kwargs) - set(asdict(self))
        if unknown:
            raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
        return replace(self, **kwargs)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOL = ToleranceConfig()
