"""Number theory kernels: digits, modular arithmetic, exponential sums, residue counts and primes."""
