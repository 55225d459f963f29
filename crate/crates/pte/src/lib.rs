//! Equal power-sum partitions of {1, ..., m}, also known as
//! Prouhet-Tarry-Escott partitions, viewed as words over a finite alphabet.

pub mod enumeration;
pub mod error;
pub mod latin;
pub mod pour;
pub mod transform;
pub mod word;

pub use enumeration::{
    brute_force_oracle, count_pte, enumerate_pte, first_pte, labeling_count, min_length,
    EnumerationReport, SearchSpec,
};
pub use error::{Error, Result};
pub use latin::{kernel_witness, search_singular, IntMatrix, KernelWitness, LatinSquare,
    SquareReport};
pub use pour::{cup_amounts, disparity, taylor_bound, verify_pouring, Density, PouringReport};
pub use transform::{
    apply_latin, concat, construct_three_letter, construct_two_letter, k_split, prouhet_word,
    reduce_by_swaps, shuffle, swap, switch_count, thue_morse, SplitSpec, SwapSpec, SwapStep,
};
pub use word::{Partition, PowerSumTable, Word, WordReport};
