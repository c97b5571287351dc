//! Front ends for rv-core: the `rv` command line and an HTTP/JSON API for
//! the browser UI. Both drive sessions through [`session::Session`].

pub mod cli;
pub mod server;
pub mod session;
