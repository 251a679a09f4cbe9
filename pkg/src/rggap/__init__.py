"""Gap probabilities and correlations of the real Ginibre bulk and of the
long-time annihilation / coalescence diffusion processes."""

__version__ = "0.1.0"
