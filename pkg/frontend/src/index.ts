/**
 * Client for the scenenav episode server.
 *
 * Spawns `python3 -m scenenav.cli serve` and speaks its line-oriented JSON
 * protocol. Requests are answered strictly in order, so the client keeps a
 * FIFO of pending resolvers and matches each stdout line to the oldest one.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface, type Interface } from "node:readline";

export interface EnvConfigDoc {
  timeout_T?: number;
  turn_delta?: number;
  move_step?: number;
  reach_radius?: number;
  large_reach_scale?: number;
  fov?: number;
  reward?: "sparse" | "dense";
  terminate_on_any_contact?: boolean;
  lexicon?: "scene" | "env";
}

export interface VisibleObject {
  id: number;
  kind: string;
  color: string;
  size: string;
  bearing: number;
  distance: number;
}

export interface Observation {
  instruction_tokens: number[];
  visible: VisibleObject[];
  t: number;
}

export interface MakeEnvReply {
  n_scenes: number;
  n_records: number;
  timeout_T: number;
  reward: string;
}

export interface ResetReply {
  observation: Observation;
  tokens: number[];
  scene_id: number;
  instruction: string;
}

export interface StepReply {
  observation: Observation;
  reward: number;
  done: boolean;
}

export class ServerError extends Error {
  constructor(public readonly name: string, message: string) {
    super(message);
  }
}

type Reply = { ok: boolean; error?: string; message?: string } & Record<string, unknown>;

interface Pending {
  resolve: (reply: Reply) => void;
  reject: (err: Error) => void;
}

export interface NavEnvOptions {
  /** Python interpreter to spawn, default "python3". */
  python?: string;
  /** Working directory for the server process. */
  cwd?: string;
}

export class NavEnv {
  private proc: ChildProcessWithoutNullStreams;
  private lines: Interface;
  private pending: Pending[] = [];
  private closed = false;

  constructor(options: NavEnvOptions = {}) {
    this.proc = spawn(options.python ?? "python3", ["-m", "scenenav.cli", "serve"], {
      cwd: options.cwd,
      stdio: ["pipe", "pipe", "pipe"],
    });
    this.lines = createInterface({ input: this.proc.stdout });
    this.lines.on("line", (line) => {
      const next = this.pending.shift();
      if (next === undefined) return;
      try {
        next.resolve(JSON.parse(line) as Reply);
      } catch (err) {
        next.reject(err as Error);
      }
    });
    this.proc.on("exit", () => {
      this.closed = true;
      for (const p of this.pending.splice(0)) {
        p.reject(new Error("server exited with replies outstanding"));
      }
    });
  }

  private request(body: Record<string, unknown>): Promise<Reply> {
    if (this.closed) {
      return Promise.reject(new Error("environment is closed"));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({
        resolve: (reply) => {
          if (reply.ok) {
            resolve(reply);
          } else {
            reject(new ServerError(String(reply.error), String(reply.message)));
          }
        },
        reject,
      });
      this.proc.stdin.write(JSON.stringify(body) + "\n");
    });
  }

  async makeEnv(
    scenes: string,
    instructions: string,
    config: EnvConfigDoc = {},
  ): Promise<MakeEnvReply> {
    const reply = await this.request({ op: "make_env", config, scenes, instructions });
    return reply as unknown as MakeEnvReply;
  }

  async envReset(seed: number): Promise<ResetReply> {
    const reply = await this.request({ op: "reset", seed });
    return reply as unknown as ResetReply;
  }

  async envStep(action: number): Promise<StepReply> {
    const reply = await this.request({ op: "step", action });
    return reply as unknown as StepReply;
  }

  async envClose(): Promise<void> {
    if (this.closed) return;
    try {
      await this.request({ op: "close" });
    } finally {
      this.closed = true;
      this.proc.stdin.end();
    }
  }
}
