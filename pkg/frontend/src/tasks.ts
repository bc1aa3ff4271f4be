/** Tracks in-flight async UI actions so tests and callers can await a
 * settled interface instead of sleeping. Rejections are surfaced on the
 * console but never left unhandled.
 */
export class TaskTracker {
  private readonly pending = new Set<Promise<unknown>>();

  run<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    promise
      .catch((err) => console.error(err))
      .finally(() => this.pending.delete(promise));
    return promise;
  }

  async idle(): Promise<void> {
    while (this.pending.size) {
      await Promise.allSettled([...this.pending]);
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
  }
}
