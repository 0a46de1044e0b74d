pub mod certificates;
pub mod cli;
pub mod config;
pub mod dissociation;
pub mod document;
pub mod exact_ml;
pub mod fourier;
pub mod interval;
pub mod primes;
pub mod reduction;
pub mod rational;
pub mod speeds;
pub mod suite;
pub mod sunflower;
