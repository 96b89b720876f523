pub mod lattice;
pub mod ring;
pub mod model;
pub mod groebner;
pub mod linalg;
pub mod foliation;
pub mod normal_form;
pub mod audit;
pub mod families;
pub mod cli;
