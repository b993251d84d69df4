pub mod evaluate;
pub mod fit;
pub mod heatmap;
pub mod simulate;
pub mod stream;
