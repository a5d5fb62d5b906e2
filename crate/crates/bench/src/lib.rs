//! Benchmarks of the jet engine, frame construction and the field fit; see
//! `benches/engine.rs`.
