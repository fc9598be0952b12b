pub mod error;
pub mod exactlin;
pub mod rootsystem;
pub mod chevalley;
pub mod seaweed;
pub mod cochain;
pub mod casimir;
pub mod gerstenhaber;
pub mod deform;
pub mod report;
