/** Trailing-edge debounce: the wrapped function runs once per settled
 * burst, with the arguments of the last call. */

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  /** Drop any pending call. */
  cancel(): void;
  /** Run a pending call immediately instead of waiting. */
  flush(): void;
  pending(): boolean;
}

export const DEFAULT_DEBOUNCE_MS = 250;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number = DEFAULT_DEBOUNCE_MS,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let lastArgs: A | null = null;

  const fire = () => {
    timer = null;
    if (lastArgs !== null) {
      const args = lastArgs;
      lastArgs = null;
      fn(...args);
    }
  };

  const debounced = (...args: A) => {
    lastArgs = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(fire, waitMs);
  };

  debounced.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    lastArgs = null;
  };

  debounced.flush = () => {
    if (timer !== null) {
      clearTimeout(timer);
      fire();
    }
  };

  debounced.pending = () => timer !== null;

  return debounced;
}
