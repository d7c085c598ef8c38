// Live Turtle preview: debounced dry-run calls against POST /validate.
// The preview text always comes from the service serializer; a network
// failure degrades to "preview unavailable" without blocking edits.

import type { PkForgeApi } from "./api.js";
import type { DryRunResult, ElicitationDoc } from "./types.js";

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const debounced = (...args: A): void => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending as A;
      pending = null;
      fn(...args2);
    }, delayMs);
  };
  debounced.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  debounced.flush = () => {
    if (timer === null || pending === null) return;
    clearTimeout(timer);
    timer = null;
    const args = pending;
    pending = null;
    fn(...args);
  };
  return debounced;
}

export interface PreviewView {
  turtle: string | null;
  result: DryRunResult | null;
  unavailable: boolean;
  message: string | null;
}

export class PreviewController {
  private readonly schedule: Debounced<[ElicitationDoc]>;
  private generation = 0;

  constructor(
    private readonly api: PkForgeApi,
    private readonly onUpdate: (view: PreviewView) => void,
    delayMs = 300,
  ) {
    this.schedule = debounce((doc: ElicitationDoc) => void this.refresh(doc), delayMs);
  }

  /** Call on every edit; at most one request per debounce window. */
  touch(doc: ElicitationDoc): void {
    this.schedule(doc);
  }

  flush(): void {
    this.schedule.flush();
  }

  dispose(): void {
    this.schedule.cancel();
  }

  private async refresh(doc: ElicitationDoc): Promise<void> {
    const generation = ++this.generation;
    try {
      const result = await this.api.dryRun(doc);
      if (generation !== this.generation) return; // a newer edit superseded us
      this.onUpdate({ turtle: result.turtle, result, unavailable: false, message: null });
    } catch (error) {
      if (generation !== this.generation) return;
      this.onUpdate({
        turtle: null,
        result: null,
        unavailable: true,
        message: error instanceof Error ? error.message : "preview unavailable",
      });
    }
  }
}
