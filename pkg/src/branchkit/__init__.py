"""Lyapunov-Schmidt reduction toolkit for bifurcations of Vlasov-Maxwell equilibria."""

__version__ = "0.1.0"
