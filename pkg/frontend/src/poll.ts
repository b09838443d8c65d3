/** Polling controller: the service has no push channel, so the inbox polls
 * — quickly for a short burst after every write, slowly when idle. */

export interface PollOptions {
  fastMs: number;
  slowMs: number;
  burstTicks: number;
}

export const DEFAULT_POLL: PollOptions = {
  fastMs: 1000,
  slowMs: 10000,
  burstTicks: 5,
};

type Scheduler = (fn: () => void, ms: number) => unknown;
type Canceller = (handle: unknown) => void;

export class PollController {
  private burstLeft = 0;
  private handle: unknown = null;
  private running = false;

  constructor(
    private readonly tick: () => Promise<void>,
    private readonly options: PollOptions = DEFAULT_POLL,
    private readonly schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
    private readonly cancel: Canceller = (h) => clearTimeout(h as number),
  ) {}

  get interval(): number {
    return this.burstLeft > 0 ? this.options.fastMs : this.options.slowMs;
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    this.arm();
  }

  stop(): void {
    this.running = false;
    if (this.handle !== null) {
      this.cancel(this.handle);
      this.handle = null;
    }
  }

  /** Call after every write: switch to the fast interval for a burst. */
  bump(): void {
    this.burstLeft = this.options.burstTicks;
    if (this.running) {
      if (this.handle !== null) this.cancel(this.handle);
      this.arm();
    }
  }

  private arm(): void {
    this.handle = this.schedule(async () => {
      if (!this.running) return;
      try {
        await this.tick();
      } finally {
        if (this.burstLeft > 0) this.burstLeft -= 1;
        if (this.running) this.arm();
      }
    }, this.interval);
  }
}
