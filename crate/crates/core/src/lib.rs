pub mod check;
pub mod cli;
pub mod class_e;
pub mod class_f;
pub mod hasse;
pub mod oeis;
pub mod oracle;
pub mod perm;
pub mod series;
pub mod verify;
