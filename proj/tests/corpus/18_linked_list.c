struct node { int value; struct node *next; };

struct node *push(struct node *head, int v) {
  struct node *n = (struct node *)malloc(sizeof(struct node));
  n->value = v;
  n->next = head;
  return n;
}

int length(struct node *h) {
  int n = 0;
  while (h) {
    n++;
    h = h->next;
  }
  return n;
}

int total(struct node *h) {
  if (!h) return 0;
  return h->value + total(h->next);
}

int main() {
  struct node *list = 0;
  int i;
  for (i = 1; i <= 10; i++) list = push(list, i * i);
  print_int(length(list));
  print_int(total(list));
  print_int(list->next->value);
  return 0;
}
