pub mod cartan;
pub mod linalg;
pub mod scalars;
pub mod ymono;
pub mod qchar;
pub mod grring;
pub mod spectra;
pub mod bethe;
pub mod sl2lab;
pub mod harness;
