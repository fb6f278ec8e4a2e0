"""Simulated-annealing estimation of Gibbs partition-function ratios."""
