//! Exact integer and rational arithmetic, 2-adic valuations, and quadratic characters.

mod character;
pub mod primes;
mod valuation;

pub use character::{QuadraticCharacter, LEGENDRE_TABLE_BOUND};
pub use primes::{
    divisors, euler_phi, factor, gcd, is_prime, is_squarefree, kronecker, mod_inverse,
    prime_divisors, primes_between, primes_up_to, psi,
};
pub use valuation::{format_rational, parse_rational, rational, TwoAdic, Valuation};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
