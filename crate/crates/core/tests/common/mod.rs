pub mod transcribed;
