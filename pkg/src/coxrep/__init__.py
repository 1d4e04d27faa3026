"""Coxeter groups, twisted GNS representations and multiplier bounds."""
