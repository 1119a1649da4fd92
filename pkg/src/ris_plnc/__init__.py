"""BER analysis and Monte-Carlo simulation of a RIS-assisted two-source multicast network
with a physical-layer network-coding decode-and-forward relay."""

from .model import BerCurve, BerPoint, ConfigError, LinkBudget, SystemConfig, validate

__all__ = ["BerCurve", "BerPoint", "ConfigError", "LinkBudget", "SystemConfig", "validate"]
__version__ = "0.1.0"
