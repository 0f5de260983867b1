#pragma once

#include <string>
#include <vector>

// Traces derived by hand from the models under the global FIFO schedule,
// in the summary form of trace_support.hpp.
namespace passflow::testing::expected {

using Lines = std::vector<std::string>;

inline Lines applicant_prefix() {
  return {
      "- actorSpawned Applicant",
      "Applicant stateEntered Start_Applicant",
      "Applicant stateEntered Write_Application",
      "Applicant stateEntered Send_Application",
      "Applicant actorSpawned Company",
      "Applicant messageSent Flow_Application->Company",
      "Company messagePooled Flow_Application",  // Company is not registered yet
      "Applicant stateEntered Wait_Answer",
      "Company stateEntered Receive_Application",
      "Company messageReceived Flow_Application pool",
      "Company stateEntered Check_Application",
      "Company taskCreated Check_Application",
  };
}

inline Lines join(Lines head, const Lines& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

inline Lines applicant_invite() {
  return join(applicant_prefix(), {
                                      "Company taskCompleted Check_Application invite",
                                      "Company stateEntered Send_Invitation",
                                      "Company messageSent Flow_Invitation->Applicant",
                                      "Applicant messageReceived Flow_Invitation",
                                      "Company stateEntered End_Company_Invited",
                                      "Company actorExited endState End_Company_Invited",
                                      "Applicant stateEntered End_Invited",
                                      "Applicant actorExited endState End_Invited",
                                  });
}

inline Lines applicant_reject() {
  return join(applicant_prefix(), {
                                      "Company taskCompleted Check_Application reject",
                                      "Company stateEntered Send_Rejection",
                                      "Company messageSent Flow_Rejection->Applicant",
                                      "Applicant messageReceived Flow_Rejection",
                                      "Company stateEntered End_Company_Rejected",
                                      "Company actorExited endState End_Company_Rejected",
                                      "Applicant stateEntered End_Rejected",
                                      "Applicant actorExited endState End_Rejected",
                                  });
}

// The company answers 500 ms after the task appears; the applicant gave up
// at 200 ms.
inline Lines applicant_late_reply() {
  return join(applicant_prefix(), {
                                      "Applicant timerFired SF_A9",
                                      "Applicant stateEntered End_NoAnswer",
                                      "Applicant actorExited endState End_NoAnswer",
                                      "Company taskCompleted Check_Application invite",
                                      "Company stateEntered Send_Invitation",
                                      "Company messageDropped Flow_Invitation recipientExited",
                                      "Company stateEntered End_Company_Invited",
                                      "Company actorExited endState End_Company_Invited",
                                  });
}

inline Lines pattern_send() {
  return {
      "- actorSpawned Requester",
      "Requester stateEntered R_Start",
      "Requester stateEntered R_Send",
      "Requester actorSpawned Provider",
      "Requester messageSent MF_Notice->Provider",
      "Provider messagePooled MF_Notice",
      "Requester stateEntered R_End",
      "Requester actorExited endState R_End",
      "Provider stateEntered P_Start",
      "Provider messageReceived MF_Notice pool",
      "Provider stateEntered P_End",
      "Provider actorExited endState P_End",
  };
}

inline Lines pattern_receive() {
  return {
      "- actorSpawned Client",
      "- actorSpawned Shop",
      "Client stateEntered C_Start",
      "Shop stateEntered S_Start",
      "Client stateEntered C_Send",
      "Client messageSent MF_Order->Shop",
      "Shop stateEntered S_Wait",
      "Shop messageReceived MF_Order",
      "Client stateEntered C_End",
      "Client actorExited endState C_End",
      "Shop stateEntered S_Ship",
      "Shop stateEntered S_End",
      "Shop actorExited endState S_End",
  };
}

inline Lines pattern_send_receive() {
  return {
      "- actorSpawned Client",
      "Client stateEntered C_Start",
      "Client stateEntered C_Request",
      "Client actorSpawned Server",
      "Client messageSent MF_Request->Server",
      "Server messagePooled MF_Request",
      "Client stateEntered C_Wait",
      "Server stateEntered S_Start",
      "Server messageReceived MF_Request pool",
      "Server stateEntered S_Handle",
      "Server stateEntered S_Respond",
      "Server messageSent MF_Response->Client",
      "Client messageReceived MF_Response",
      "Server stateEntered S_End",
      "Server actorExited endState S_End",
      "Client stateEntered C_End",
      "Client actorExited endState C_End",
  };
}

inline Lines pattern_racing() {
  return {
      "- actorSpawned BidderA",
      "- actorSpawned BidderB",
      "- actorSpawned Broker",
      "BidderA stateEntered A_Start",
      "BidderB stateEntered B_Start",
      "Broker stateEntered K_Start",
      "BidderA stateEntered A_Bid",
      "BidderA messageSent MF_BidA->Broker",
      "BidderB stateEntered B_Bid",
      "BidderB messageSent MF_BidB->Broker",
      "Broker stateEntered K_Race",
      "Broker messageReceived MF_BidA",
      "BidderA stateEntered A_End",
      "BidderA actorExited endState A_End",
      "Broker messagePooled MF_BidB",  // arrives while the winning transition is in flight
      "BidderB stateEntered B_End",
      "BidderB actorExited endState B_End",
      "Broker stateEntered K_WonA",
      "Broker actorExited endState K_WonA [MF_BidB]",
  };
}

// Broker's own steps when bidder `x` (A or B) wins, whatever the schedule.
inline Lines racing_broker(char x) {
  std::string bid = std::string("MF_Bid") + x, won = std::string("K_Won") + x;
  return {"Broker stateEntered K_Start", "Broker stateEntered K_Race", "Broker messageReceived " + bid,
          "Broker stateEntered " + won};
}

}  // namespace passflow::testing::expected
