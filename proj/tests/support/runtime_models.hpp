#pragma once

#include "model_builder.hpp"

// Small models that exercise one runtime mechanism each.
namespace passflow::testing {

using pass::FieldType;
using pass::StateKind;

// S sends two orders, each carrying the number typed in just before; R is
// busy in a task until both have arrived.
inline pass::PassModel two_orders_model() {
  return ModelBuilder("TwoOrders", "Two orders")
      .subject("S", true)
      .subject("R")
      .exchange("Order", "S", "R", {{"n", "n", FieldType::Integer}})
      .state("S", "S1", StateKind::Do, {rw("n", FieldType::Integer)})
      .state("S", "S2", StateKind::Send)
      .state("S", "S3", StateKind::Do, {rw("n", FieldType::Integer)})
      .state("S", "S4", StateKind::Send)
      .end("S", "S5")
      .go("S", "s12", "S1", "S2", "ok")
      .send("S", "s23", "S2", "S3", "Order")
      .go("S", "s34", "S3", "S4", "ok")
      .send("S", "s45", "S4", "S5", "Order")
      .state("R", "R1", StateKind::Do, {rw("note")})
      .state("R", "R2", StateKind::Receive)
      .state("R", "R3", StateKind::Do)
      .state("R", "R4", StateKind::Receive)
      .end("R", "R5")
      .go("R", "r12", "R1", "R2", "go")
      .receive("R", "r23", "R2", "R3", "Order")
      .go("R", "r34", "R3", "R4")
      .receive("R", "r45", "R4", "R5", "Order")
      .build();
}

// P creates Q by sending it X1, then waits in a task; Q waits for X2.
inline pass::PassModel parent_child_model() {
  return ModelBuilder("Family", "Family")
      .subject("P", true)
      .subject("Q")
      .exchange("X1", "P", "Q")
      .exchange("X2", "P", "Q")
      .state("P", "P1", StateKind::Send)
      .state("P", "P2", StateKind::Do)
      .state("P", "P3", StateKind::Send)
      .end("P", "P4")
      .send("P", "p12", "P1", "P2", "X1")
      .go("P", "more", "P2", "P3", "more")
      .go("P", "stop", "P2", "P4", "stop")
      .send("P", "p34", "P3", "P4", "X2")
      .state("Q", "Q1", StateKind::Receive)
      .state("Q", "Q2", StateKind::Receive)
      .end("Q", "Q3")
      .receive("Q", "q12", "Q1", "Q2", "X1")
      .receive("Q", "q23", "Q2", "Q3", "X2")
      .build();
}

// A creates C and then B; once B has answered, A tells C to go, and C
// messages B, which it must find in its address book.
inline pass::PassModel discovery_model() {
  return ModelBuilder("Discovery", "Discovery")
      .subject("A", true)
      .subject("B")
      .subject("C")
      .exchange("ToC", "A", "C")
      .exchange("ToB", "A", "B")
      .exchange("Ack", "B", "A")
      .exchange("Go", "A", "C")
      .exchange("CtoB", "C", "B")
      .state("A", "A1", StateKind::Send)
      .state("A", "A2", StateKind::Send)
      .state("A", "A3", StateKind::Receive)
      .state("A", "A4", StateKind::Send)
      .end("A", "A5")
      .send("A", "a12", "A1", "A2", "ToC")
      .send("A", "a23", "A2", "A3", "ToB")
      .receive("A", "a34", "A3", "A4", "Ack")
      .send("A", "a45", "A4", "A5", "Go")
      .state("B", "B1", StateKind::Receive)
      .state("B", "B2", StateKind::Send)
      .state("B", "B3", StateKind::Receive)
      .end("B", "B4")
      .receive("B", "b12", "B1", "B2", "ToB")
      .send("B", "b23", "B2", "B3", "Ack")
      .receive("B", "b34", "B3", "B4", "CtoB")
      .state("C", "C1", StateKind::Receive)
      .state("C", "C2", StateKind::Receive)
      .state("C", "C3", StateKind::Send)
      .end("C", "C4")
      .receive("C", "c12", "C1", "C2", "ToC")
      .receive("C", "c23", "C2", "C3", "Go")
      .send("C", "c34", "C3", "C4", "CtoB")
      .build();
}

// A and C both open by messaging B, which nobody has created yet.
inline pass::PassModel race_model() {
  return ModelBuilder("Race", "Race")
      .subject("A", true)
      .subject("C", true)
      .subject("B")
      .exchange("XA", "A", "B")
      .exchange("XC", "C", "B")
      .state("A", "A1", StateKind::Send)
      .end("A", "A2")
      .send("A", "a", "A1", "A2", "XA")
      .state("C", "C1", StateKind::Send)
      .end("C", "C2")
      .send("C", "c", "C1", "C2", "XC")
      .state("B", "B1", StateKind::Receive)
      .state("B", "B2", StateKind::Receive)
      .end("B", "B3")
      .receive("B", "b1", "B1", "B2", "XA")
      .receive("B", "b2", "B2", "B3", "XC")
      .build();
}

}  // namespace passflow::testing
