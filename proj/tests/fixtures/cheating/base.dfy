b := a+1;  
while ( b < n )
// FILL IN INVARIANTS.
{
  if ( X[b] <= p ) {
    var t := X[b];
    X[b] := X[a];
    X[a] := t;
    a := a + 1;
  }
  b := b + 1;
}
