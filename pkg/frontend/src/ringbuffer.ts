/**
 * Fixed-capacity ring buffer: pushing beyond capacity evicts the oldest
 * item. Backs the strip-chart histories, which keep only the most
 * recent window of ticks.
 */
export class RingBuffer<T> {
  private items: T[] = [];
  private start = 0;

  constructor(readonly capacity: number) {
    if (!Number.isInteger(capacity) || capacity < 1) {
      throw new RangeError("capacity must be a positive integer");
    }
  }

  get length(): number {
    return this.items.length;
  }

  get full(): boolean {
    return this.items.length === this.capacity;
  }

  push(item: T): void {
    if (this.items.length < this.capacity) {
      this.items.push(item);
      return;
    }
    this.items[this.start] = item;
    this.start = (this.start + 1) % this.capacity;
  }

  /** Item at logical index i, 0 = oldest retained. */
  at(index: number): T {
    if (index < 0 || index >= this.items.length) {
      throw new RangeError(`index ${index} out of range`);
    }
    return this.items[(this.start + index) % this.capacity] as T;
  }

  last(): T | undefined {
    if (this.items.length === 0) {
      return undefined;
    }
    return this.at(this.items.length - 1);
  }

  toArray(): T[] {
    const out: T[] = [];
    for (let i = 0; i < this.items.length; i += 1) {
      out.push(this.at(i));
    }
    return out;
  }

  clear(): void {
    this.items = [];
    this.start = 0;
  }
}
