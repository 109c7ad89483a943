"""Seeded CLI invocations shared by the CLI tests and the acceptance suite."""

SEEDED_COMMANDS = [
    ["schur", "-n", "0,2,4", "-u", "1,1,1"],
    ["threshold", "--sharp", "-n", "0,1", "-c", "1,1", "-M", "2", "--rho", "1"],
    ["threshold", "--cube", "-n", "0,1", "-c", "1,1", "--alphas", "2,3"],
    ["certify", "-f", "1 + x - 0.2*x^2", "-N", "2", "--rho", "1", "--samples", "2000", "--seed", "7"],
    ["certify", "-f", "1 + x - 0.21*x^2", "-N", "2", "--rho", "1", "--samples", "2000", "--seed", "7"],
    ["sign-series", "--base", "0,1", "--tail", "2:-1,3:1", "--rho", "1", "--samples", "1024", "--seed", "3"],
    ["hciz", "--alpha", "0,1", "-x", "0,0.6931471805599453", "--samples", "20000", "--seed", "5"],
    ["majorize", "-m", "0,1", "-n", "0,3", "--converse", "--budget", "200", "--seed", "2"],
    ["tn", "--moments", "1,1,2,5,14", "--brute"],
    ["logsup", "--vandermonde", "1,2,3;0,1,2", "--rows1", "1", "--rows2", "2", "--cols1", "2", "--cols2", "1", "--exact"],
    ["counterexample", "--complex", "-n", "0,2", "--seed", "4"],
    ["counterexample", "--two-sided", "-k", "1", "-t", "3", "--rho", "2"],
]
