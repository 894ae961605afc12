//! Bench-only crate; the measurements live in `benches/kernels.rs` and run
//! with `cargo bench -p cheb-bench`.  Nothing here is part of the library
//! API.
