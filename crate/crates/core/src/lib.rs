pub mod cartan;
pub mod cli;
pub mod datum;
pub mod freealg;
pub mod pbw;
pub mod scalars;
pub mod series;
pub mod weyl;
pub mod words;
