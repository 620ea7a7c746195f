pub mod cli;
pub mod greens;
pub mod io;
pub mod numerics;
pub mod oracle;
pub mod spectra;
pub mod specfun;
pub mod tables;
pub mod units;
pub mod verify;
