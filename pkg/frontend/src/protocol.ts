// Wire types for the session server protocol. Field names mirror the
// server's lower_snake_case JSON exactly.

export interface Census {
  susceptible: number;
  incubating: number;
  asymptomatic: number;
  symptomatic: number;
  recovered: number;
}

export interface Estimates {
  true: number;
  proportional: number;
  predictive: number;
}

export interface CumulativeIndicators {
  duration_days: number;
  serious_total: number;
  peak_daily_new_infections: number;
  infected_total: number;
  vaccines_total: number;
}

export interface Frame {
  type: "frame";
  day: number;
  census: Census;
  new_infections: number;
  estimates: Estimates;
  doses_given: number;
  tests_done: number;
  lockdown: boolean;
  cumulative: CumulativeIndicators;
}

export interface Ack {
  type: "ack";
  kind: string;
  day: number;
}

export interface ErrorMessage {
  type: "error";
  kind?: string;
  message: string;
}

export type ServerMessage = Frame | Ack | ErrorMessage;

export type CommandKind =
  | "start"
  | "pause"
  | "step"
  | "reset"
  | "set_screening"
  | "set_vaccination"
  | "inject_infected"
  | "toggle_lockdown";

export interface Command {
  type: "command";
  kind: CommandKind;
  [key: string]: unknown;
}

export interface ScreeningConfigPayload {
  enabled: boolean;
  daily_tests: number;
  trigger_symptomatic_share: number;
  target: "random" | "symptomatic" | "elderly" | "workers";
  params?: { sensitivity: number; specificity: number };
}

export interface VaccinationConfigPayload {
  enabled: boolean;
  trigger_infected_share: number;
  daily_doses: number;
  strategy: "random" | "risk" | "contacts";
  efficiency?: number;
}
